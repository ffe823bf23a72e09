"""Per-vertex tangent fans, arc-length energy minimization, and the outer pass loop.

Each pass visits vertices in descending degree order. For a vertex ``v`` of
degree ``d`` the farthest neighbor fixes a base direction, the remaining
neighbors are taken clockwise, and tangent ``k`` is set to
``base - 2*pi*k/d``. With those directions frozen, ``v`` moves to the position
minimizing the summed arc lengths to its (fixed) neighbors, and its incident
edges are redrawn as arcs leaving ``v`` along the fan.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateGeometryError, GraphError, NearDegenerateArcError
from .geometry import (
    TWO_PI, ArcEdge, Point, arc_from_chord, arc_through_tangent, bearing, distance,
    gap_deviation, normalize_angle, straight_edge, tangent_chord_angle, tangent_perp_distance,
)
from .graph import Graph, Layout
from .optimize import nelder_mead

log = logging.getLogger(__name__)

# Tangent-chord angles past this are charged a steep linear penalty instead of
# the diverging arc length.
THETA_CAP = math.pi - 1e-6
BARRIER_SLOPE = 1e6


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-4  # max displacement per pass, as a fraction of the bbox diagonal
    max_passes: int = 200
    inner_tol: float = 1e-8  # simplex diameter, relative to the initial simplex scale
    inner_max_evals: int = 500
    min_chord: float = 1e-9
    seed: int = 0
    scan_points: int = 41  # coarse grid per axis for picking restart basins
    restarts: int = 3

    def __post_init__(self):
        if self.scan_points < 2 or self.restarts < 0:
            raise ValueError("scan_points must be >= 2 and restarts >= 0")
        for name in ("epsilon", "max_passes", "inner_tol", "inner_max_evals", "min_chord"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "max_passes": self.max_passes,
                "inner_tol": self.inner_tol, "inner_max_evals": self.inner_max_evals,
                "min_chord": self.min_chord, "seed": self.seed,
                "scan_points": self.scan_points, "restarts": self.restarts}


@dataclass(frozen=True)
class TangentFan:
    """Prescribed edge directions at ``center``.

    ``neighbors[0]`` is the farthest neighbor, the rest follow clockwise;
    ``angles[k]`` is the tangent assigned to the edge toward ``neighbors[k]``.
    """

    center: int
    neighbors: tuple
    base_angle: float
    angles: tuple

    @property
    def degree(self) -> int:
        return len(self.neighbors)

    def angle_for(self, neighbor: int) -> float:
        return self.angles[self.neighbors.index(neighbor)]


@dataclass(frozen=True)
class ChordFrame:
    neighbor: int
    chord_r: float
    phi: float
    D: float  # perpendicular distance from the neighbor to the tangent line
    theta: float


@dataclass
class RunReport:
    passes: int = 0
    max_displacement: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    # bounding-box diagonal after each pass; shows whether the drawing is contracting
    diagonal: list = field(default_factory=list)
    converged: bool = False
    # final diagonal below 1e-6 of the initial one: the drawing shrank to a point
    collapsed: bool = False
    initial_energy: float = 0.0
    # measured with every incident edge's actual tangent when the run ends
    angular_deviation: list = field(default_factory=list)
    # measured right after each vertex's most recent redraw (None if never redrawn)
    rebuild_deviation: list = field(default_factory=list)
    frozen: list = field(default_factory=list)
    fallback_edges: list = field(default_factory=list)
    perturbations: int = 0
    fans: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "max_displacement": list(self.max_displacement),
            "energy": list(self.energy),
            "diagonal": list(self.diagonal),
            "converged": self.converged,
            "collapsed": self.collapsed,
            "initial_energy": self.initial_energy,
            "angular_deviation": list(self.angular_deviation),
            "rebuild_deviation": list(self.rebuild_deviation),
            "frozen": list(self.frozen),
            "fallback_edges": [list(e) for e in self.fallback_edges],
            "perturbations": self.perturbations,
        }


def degree_ordering(g: Graph) -> list:
    """Vertices by descending degree, ties by ascending id."""
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def farthest_neighbor(layout: Layout, v: int, g: Graph) -> int:
    nbrs = g.neighbors(v)
    if not nbrs:
        raise GraphError(f"vertex {v} has no neighbors")
    p = layout[v]
    return min(nbrs, key=lambda u: (-distance(p, layout[u]), u))


def clockwise_neighbor_order(layout: Layout, v: int, start: int, g: Graph,
                             min_chord: float = 1e-12) -> list:
    """Neighbors of ``v`` sorted clockwise by straight-line bearing, beginning at ``start``."""
    nbrs = g.neighbors(v)
    if start not in nbrs:
        raise GraphError(f"{start} is not a neighbor of {v}")
    p = layout[v]
    for u in nbrs:
        if distance(p, layout[u]) <= min_chord:
            raise DegenerateGeometryError(f"neighbor {u} coincides with vertex {v}")
    b0 = bearing(p, layout[start])

    def key(u):
        return (u != start, normalize_angle(b0 - bearing(p, layout[u])), u)

    return sorted(nbrs, key=key)


def build_tangent_fan(layout: Layout, v: int, g: Graph, min_chord: float = 1e-12) -> TangentFan:
    d = g.degree(v)
    if d < 2:
        raise GraphError(f"vertex {v} has degree {d}; a tangent fan needs at least 2")
    start = farthest_neighbor(layout, v, g)
    order = clockwise_neighbor_order(layout, v, start, g, min_chord)
    base = bearing(layout[v], layout[start])
    angles = tuple(normalize_angle(base - TWO_PI * k / d) for k in range(d))
    return TangentFan(v, tuple(order), base, angles)


def _min_chord(cfg) -> float:
    return cfg.min_chord if cfg is not None else 1e-12


def chord_frames(candidate, fan: TangentFan, layout: Layout, min_chord: float = 1e-12) -> list:
    """Per-neighbor chord geometry for the center placed at ``candidate``.

    Tangent angles are absolute, so no frame rotation is needed: D and theta
    depend only on the neighbor offset and the tangent direction.
    """
    frames = []
    for nb, phi in zip(fan.neighbors, fan.angles):
        q = layout[nb]
        rel = Point(q[0] - candidate[0], q[1] - candidate[1])
        r = rel.norm()
        if r <= min_chord:
            raise DegenerateGeometryError(f"candidate within {min_chord} of neighbor {nb}")
        frames.append(ChordFrame(nb, r, phi, tangent_perp_distance(rel, phi),
                                 tangent_chord_angle(candidate, q, phi)))
    return frames


def _arc_term(r: float, theta: float) -> float:
    if theta > THETA_CAP:
        return arc_from_chord(r, THETA_CAP) + r * (theta - THETA_CAP) * BARRIER_SLOPE
    return arc_from_chord(r, theta)


def _targets(fan: TangentFan, layout: Layout):
    return [(layout[nb][0], layout[nb][1], math.cos(phi), math.sin(phi))
            for nb, phi in zip(fan.neighbors, fan.angles)]


def _energy(x: float, y: float, targets, min_chord: float) -> float:
    # hot path of the minimizer: _arc_term inlined
    total = 0.0
    hypot, atan2, sin = math.hypot, math.atan2, math.sin
    for qx, qy, c, s in targets:
        cx, cy = qx - x, qy - y
        r = hypot(cx, cy)
        if r <= min_chord:
            raise DegenerateGeometryError("candidate coincides with a neighbor")
        theta = abs(atan2(c * cy - s * cx, c * cx + s * cy))
        if theta < 1e-8:
            total += r * (1.0 + theta * theta / 6.0)
        elif theta <= THETA_CAP:
            total += r * theta / sin(theta)
        else:
            total += _arc_term(r, theta)
    return total


def local_objective(candidate, fan: TangentFan, layout: Layout,
                    cfg: Optional[SolverConfig] = None) -> float:
    """Summed arc length from ``candidate`` to each fan neighbor along its fixed tangent."""
    return _energy(candidate[0], candidate[1], _targets(fan, layout), _min_chord(cfg))


def _scan(targets, lo, hi, n: int, min_chord: float):
    # vectorized energy on an n x n grid; same formula as _energy, inf where degenerate
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    X, Y = np.meshgrid(xs, ys)
    total = np.zeros_like(X)
    for qx, qy, c, s in targets:
        cx, cy = qx - X, qy - Y
        r = np.hypot(cx, cy)
        theta = np.abs(np.arctan2(c * cy - s * cx, c * cx + s * cy))
        capped = np.minimum(theta, THETA_CAP)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(capped < 1e-8, 1.0, capped / np.sin(capped))
        term = r * ratio + np.where(theta > THETA_CAP, r * (theta - THETA_CAP) * BARRIER_SLOPE, 0.0)
        total += np.where(r <= min_chord, np.inf, term)
    return X, Y, total


def minimize_vertex(v: int, fan: TangentFan, layout: Layout,
                    cfg: Optional[SolverConfig] = None) -> Point:
    """Position for ``v`` minimizing :func:`local_objective` with the fan held fixed.

    The energy has several basins: behind every neighbor, along its tangent
    line, the arc length blows up and walls off the plane. A Nelder-Mead
    simplex (edge 0.1 x mean chord) is therefore started at the current
    position and also at the ``cfg.restarts`` lowest cells of a coarse grid
    over the neighbors' bounding box padded by half its size. The best result
    wins; the current position is kept unless something strictly lower was found.
    """
    cfg = cfg or SolverConfig()
    start = layout[v]
    targets = _targets(fan, layout)
    chords = [math.hypot(qx - start.x, qy - start.y) for qx, qy, _, _ in targets]
    if all(c <= cfg.min_chord for c in chords):
        raise DegenerateGeometryError(f"every neighbor of {v} coincides with it")
    e0 = _energy(start.x, start.y, targets, cfg.min_chord)
    scale = 0.1 * sum(chords) / len(chords)

    def f(p):
        try:
            return _energy(p[0], p[1], targets, cfg.min_chord)
        except DegenerateGeometryError:
            return math.inf

    starts = [(start.x, start.y)]
    if cfg.restarts:
        xs = [t[0] for t in targets] + [start.x]
        ys = [t[1] for t in targets] + [start.y]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 10 * scale)
        lo = (min(xs) - 0.5 * span, min(ys) - 0.5 * span)
        hi = (max(xs) + 0.5 * span, max(ys) + 0.5 * span)
        X, Y, E = _scan(targets, lo, hi, cfg.scan_points, cfg.min_chord)
        # stable argsort keeps the choice deterministic on ties
        for idx in np.argsort(E, axis=None, kind="stable")[:cfg.restarts]:
            if np.isfinite(E.flat[idx]):
                starts.append((float(X.flat[idx]), float(Y.flat[idx])))

    best_x, best_f = (start.x, start.y), e0
    for x0 in starts:
        res = nelder_mead(f, x0, scale, cfg.inner_tol * scale, cfg.inner_max_evals)
        if res.fun < best_f:
            best_x, best_f = res.x, res.fun
    if best_f < e0:
        return Point(best_x[0], best_x[1])
    return start


def rebuild_arcs(v: int, fan: TangentFan, layout: Layout) -> list:
    """Redraw every edge at ``v`` as the arc leaving ``v`` along its fan tangent.

    An edge whose neighbor sits almost directly behind its tangent cannot be
    drawn as an arc; it is drawn straight with ``fallback=True``.
    """
    p = layout[v]
    arcs = []
    for nb, phi in zip(fan.neighbors, fan.angles):
        try:
            arcs.append(arc_through_tangent(p, layout[nb], phi, owner=v, other=nb))
        except NearDegenerateArcError:
            e = straight_edge(min(v, nb), max(v, nb), p, layout[nb], owner=v)
            arcs.append(ArcEdge(**{**e.__dict__, "fallback": True}))
    return arcs


def _vertex_deviation(v: int, incident: list) -> float:
    return gap_deviation([a.departure_angle(v) for a in incident])


def run(g: Graph, init: Layout, cfg: Optional[SolverConfig] = None, progress=None,
        pinned=()):
    """Iterate full passes until the largest per-pass move is below
    ``epsilon`` x bounding-box diagonal, or ``max_passes`` is reached.

    Vertices of degree < 2 never move. Vertices in ``pinned`` keep their
    position but still have their edges redrawn along a fan; without any pinned
    vertex the unconstrained energy drives the drawing to contract.

    ``progress``, if given, is called as ``progress(pass_index, energy, displacement)``
    after each pass. Returns ``(layout, arcs, report)`` where ``arcs`` follows
    ``g.edges`` order.
    """
    cfg = cfg or SolverConfig()
    if len(init) != g.n:
        raise GraphError(f"layout has {len(init)} positions for {g.n} vertices")
    layout = init.copy()
    pinned = frozenset(pinned)
    rng = random.Random(cfg.seed)
    edges = g.edges
    arcs = {(a, b): straight_edge(a, b, layout[a], layout[b], owner=a) for a, b in edges}
    incident = {v: [(min(v, u), max(v, u)) for u in g.neighbors(v)] for v in range(g.n)}

    report = RunReport()
    report.initial_energy = sum(a.arc_length for a in arcs.values())
    report.rebuild_deviation = [None] * g.n
    failures = [0] * g.n
    frozen = set()
    fallback = set()
    order = degree_ordering(g)

    for pass_idx in range(cfg.max_passes):
        before = list(layout.positions)
        for v in order:
            if g.degree(v) < 2 or v in frozen:
                continue
            fan = None
            while fan is None:
                try:
                    fan = build_tangent_fan(layout, v, g, cfg.min_chord)
                    target = layout[v] if v in pinned else minimize_vertex(v, fan, layout, cfg)
                except DegenerateGeometryError as exc:
                    fan = None
                    failures[v] += 1
                    if failures[v] >= 3:
                        log.warning("freezing vertex %d after repeated degeneracy: %s", v, exc)
                        frozen.add(v)
                        break
                    diag = layout.diagonal() or 1.0
                    a = rng.uniform(0.0, TWO_PI)
                    p = layout[v]
                    layout.positions[v] = Point(p.x + 1e-6 * diag * math.cos(a),
                                                p.y + 1e-6 * diag * math.sin(a))
                    report.perturbations += 1
            if fan is None:
                continue
            layout.positions[v] = target
            for arc in rebuild_arcs(v, fan, layout):
                key = (arc.u, arc.v)
                arcs[key] = arc
                if arc.fallback:
                    fallback.add(key)
                else:
                    fallback.discard(key)
            report.fans[v] = fan
            report.rebuild_deviation[v] = _vertex_deviation(v, [arcs[k] for k in incident[v]])

        disp = max((distance(a, b) for a, b in zip(before, layout.positions)), default=0.0)
        energy = sum(a.arc_length for a in arcs.values())
        report.passes = pass_idx + 1
        report.max_displacement.append(disp)
        report.energy.append(energy)
        report.diagonal.append(layout.diagonal())
        if progress is not None:
            progress(pass_idx + 1, energy, disp)
        if disp == 0.0 or disp < cfg.epsilon * layout.diagonal():
            report.converged = True
            break

    report.angular_deviation = [
        _vertex_deviation(v, [arcs[k] for k in incident[v]]) if g.degree(v) >= 2 else 0.0
        for v in range(g.n)
    ]
    report.collapsed = g.n > 1 and layout.diagonal() < 1e-6 * init.diagonal()
    report.frozen = sorted(frozen)
    report.fallback_edges = sorted(fallback)
    return layout, [arcs[e] for e in edges], report
