"""Initial straight-line drawings: Tutte barycentric relaxation and Fruchterman-Reingold."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from .errors import GraphError
from .geometry import Point
from .graph import Graph, Layout

log = logging.getLogger(__name__)


@dataclass
class BoundarySpec:
    """Vertices pinned at fixed points for the barycentric relaxation."""

    pinned: list = field(default_factory=list)  # [(vertex, Point), ...]

    def validate(self, g: Graph) -> None:
        ids = [v for v, _ in self.pinned]
        if len(set(ids)) != len(ids):
            raise GraphError(f"boundary pins a vertex twice: {ids}")
        for v in ids:
            if not 0 <= v < g.n:
                raise GraphError(f"boundary vertex {v} outside [0, {g.n})")
        if len(ids) < 3 and len(ids) < g.n:
            raise GraphError("a barycentric layout needs at least 3 pinned vertices")
        if len(ids) >= 3 and not _convex_position([p for _, p in self.pinned]):
            raise GraphError("pinned points are not in convex position")


def _convex_position(points) -> bool:
    # every point must be a vertex of the convex hull (collinear triples rejected)
    pts = [Point(*p) for p in points]
    if len(set(pts)) != len(pts):
        return False
    hull = _hull(pts)
    return len(hull) == len(pts)


def _hull(pts):
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def regular_polygon(m: int, radius: float = 1.0) -> list:
    """``m`` points on a circle of the given circumradius, counterclockwise from (r, 0)."""
    return [Point(radius * math.cos(2 * math.pi * i / m), radius * math.sin(2 * math.pi * i / m))
            for i in range(m)]


def _find_cycle(g: Graph, start: int):
    # iterative DFS; the first back edge closes a cycle along the DFS tree path
    parent = {start: -1}
    depth = {start: 0}
    stack = [(start, iter(g.neighbors(start)))]
    path = [start]
    while stack:
        u, it = stack[-1]
        advanced = False
        for w in it:
            if w == parent[u]:
                continue
            if w in depth:
                if depth[w] < depth[u]:
                    return path[depth[w]:]
                continue
            parent[w] = u
            depth[w] = depth[u] + 1
            path.append(w)
            stack.append((w, iter(g.neighbors(w))))
            advanced = True
            break
        if not advanced:
            stack.pop()
            path.pop()
    return None


def pick_boundary(g: Graph, seed: int = 0) -> BoundarySpec:
    """Choose an outer cycle and pin it on a unit-circumradius regular polygon.

    The depth-first search starts at vertex ``seed % n`` and visits neighbors in
    ascending order; the first cycle it closes becomes the boundary. Acyclic
    graphs pin their three highest-degree vertices instead.
    """
    if g.n < 3:
        raise GraphError(f"need at least 3 vertices to pick a boundary, got {g.n}")
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    cycle = _find_cycle(g, seed % g.n)
    if cycle is None:
        cycle = sorted(range(g.n), key=lambda v: (-g.degree(v), v))[:3]
    return BoundarySpec(list(zip(cycle, regular_polygon(len(cycle)))))


@dataclass
class TutteResult:
    layout: Layout
    sweeps: int
    converged: bool
    max_residual: float


def tutte_relax(g: Graph, boundary: BoundarySpec, tol: float = 1e-9,
                max_iters: int = 100_000) -> TutteResult:
    """Gauss-Seidel barycentric relaxation with the boundary held fixed.

    Free vertices start at the centroid of the pinned points and are swept in
    ascending id order until no vertex moves by ``tol`` or more in a sweep.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not g.is_connected():
        raise GraphError("barycentric layout requires a connected graph")
    boundary.validate(g)
    pinned = dict(boundary.pinned)
    if pinned:
        cx = sum(p[0] for p in pinned.values()) / len(pinned)
        cy = sum(p[1] for p in pinned.values()) / len(pinned)
    else:
        cx = cy = 0.0
    xs = [cx] * g.n
    ys = [cy] * g.n
    for v, p in pinned.items():
        xs[v], ys[v] = float(p[0]), float(p[1])
    free = [v for v in range(g.n) if v not in pinned]

    sweeps = 0
    converged = not free
    while not converged and sweeps < max_iters:
        sweeps += 1
        worst = 0.0
        for v in free:
            nb = g.neighbors(v)
            nx = sum(xs[w] for w in nb) / len(nb)
            ny = sum(ys[w] for w in nb) / len(nb)
            worst = max(worst, math.hypot(nx - xs[v], ny - ys[v]))
            xs[v], ys[v] = nx, ny
        converged = worst < tol

    residual = 0.0
    for v in free:
        nb = g.neighbors(v)
        residual = max(residual, math.hypot(sum(xs[w] for w in nb) / len(nb) - xs[v],
                                            sum(ys[w] for w in nb) / len(nb) - ys[v]))
    if not converged:
        log.warning("barycentric relaxation stopped after %d sweeps (residual %.3g)",
                    sweeps, residual)
    return TutteResult(Layout(list(zip(xs, ys))), sweeps, converged, residual)


def tutte_layout(g: Graph, boundary: BoundarySpec, tol: float = 1e-9,
                 max_iters: int = 100_000) -> Layout:
    """Barycentric layout; see :func:`tutte_relax` for the convergence details."""
    return tutte_relax(g, boundary, tol, max_iters).layout


def fruchterman_reingold(g: Graph, seed: int = 0, iters: int = 500,
                         area: float = 1.0) -> Layout:
    """Spring-electrical layout with a linearly cooling step cap.

    Attraction d^2/k along edges, repulsion k^2/d between all pairs,
    k = sqrt(area / n). Positions start uniform in a square of the given area.
    """
    n = g.n
    if n == 0:
        return Layout([])
    rng = random.Random(seed)
    side = math.sqrt(area)
    xs = [rng.uniform(-side / 2, side / 2) for _ in range(n)]
    ys = [rng.uniform(-side / 2, side / 2) for _ in range(n)]
    k = math.sqrt(area / n)
    t0 = side / 10.0
    edges = g.edges
    for it in range(iters):
        temp = t0 * (1.0 - it / iters)
        dx = [0.0] * n
        dy = [0.0] * n
        for i in range(n):
            for j in range(i + 1, n):
                ex, ey = xs[i] - xs[j], ys[i] - ys[j]
                d = math.hypot(ex, ey)
                if d < 1e-12:
                    # coincident pair: push apart along a seeded direction
                    a = rng.uniform(0, 2 * math.pi)
                    ex, ey, d = math.cos(a) * 1e-6, math.sin(a) * 1e-6, 1e-6
                f = k * k / d
                dx[i] += ex / d * f
                dy[i] += ey / d * f
                dx[j] -= ex / d * f
                dy[j] -= ey / d * f
        for u, v in edges:
            ex, ey = xs[u] - xs[v], ys[u] - ys[v]
            d = math.hypot(ex, ey)
            if d < 1e-12:
                continue
            f = d * d / k
            dx[u] -= ex / d * f
            dy[u] -= ey / d * f
            dx[v] += ex / d * f
            dy[v] += ey / d * f
        for i in range(n):
            m = math.hypot(dx[i], dy[i])
            if m > 0:
                step = min(m, temp)
                xs[i] += dx[i] / m * step
                ys[i] += dy[i] / m * step
    return Layout(list(zip(xs, ys)))


def initial_layout(g: Graph, method: str = "tutte", boundary: BoundarySpec = None,
                   seed: int = 0, fr_iters: int = 500):
    """Initial drawing for the CLI. Returns ``(layout, info)`` where ``info`` is JSON-ready.

    Graphs with fewer than three vertices are placed directly on the x axis,
    since neither a boundary cycle nor meaningful repulsion exists for them.
    """
    if g.n < 3:
        pts = [Point(float(i), 0.0) for i in range(g.n)]
        return Layout(pts), {"method": "line", "n": g.n}
    if method == "fr":
        return fruchterman_reingold(g, seed, fr_iters), {"method": "fr", "iters": fr_iters}
    if method != "tutte":
        raise ValueError(f"unknown initializer {method!r}")
    if boundary is None:
        boundary = pick_boundary(g, seed)
    res = tutte_relax(g, boundary)
    info = {"method": "tutte", "sweeps": res.sweeps, "converged": res.converged,
            "max_residual": res.max_residual,
            "boundary": [[v, p[0], p[1]] for v, p in boundary.pinned]}
    return res.layout, info
