"""Derivative-free Nelder-Mead simplex minimization."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class SimplexResult:
    x: list
    fun: float
    evals: int
    converged: bool  # simplex diameter fell below the tolerance


def _diameter(simplex) -> float:
    dist = math.dist
    return max(dist(a, b) for i, a in enumerate(simplex) for b in simplex[i + 1:])


def nelder_mead(func, x0, scale: float, xtol: float, max_evals: int,
                alpha=1.0, gamma=2.0, rho=0.5, sigma=0.5) -> SimplexResult:
    """Minimize ``func`` starting from a right-angled simplex at ``x0``.

    Stops when the simplex diameter drops below ``xtol`` or after ``max_evals``
    function evaluations. ``func`` may return ``inf`` to reject a point. The
    returned value is never worse than ``func(x0)``, since ``x0`` is a vertex of
    the initial simplex and only strictly better points displace the best one.
    """
    dim = len(x0)
    pts = [list(map(float, x0))]
    for i in range(dim):
        p = list(pts[0])
        p[i] += scale
        pts.append(p)
    vals = [func(p) for p in pts]
    evals = len(pts)

    if dim == 2:
        def add(a, b, t):
            return [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    else:
        def add(a, b, t):
            # a + t * (b - a)
            return [ai + t * (bi - ai) for ai, bi in zip(a, b)]

    converged = False
    while True:
        # stable sort keeps the earlier vertex first on ties
        order = sorted(range(dim + 1), key=lambda i: vals[i])
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        if _diameter(pts) < xtol:
            converged = True
            break
        if evals >= max_evals:
            break
        centroid = [sum(p[i] for p in pts[:-1]) / dim for i in range(dim)]
        worst = pts[-1]
        xr = add(centroid, worst, -alpha)
        fr = func(xr)
        evals += 1
        if vals[0] <= fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[0]:
            xe = add(centroid, worst, -gamma)
            fe = func(xe)
            evals += 1
            if fe < fr:
                pts[-1], vals[-1] = xe, fe
            else:
                pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            # outside contraction
            xc = add(centroid, xr, rho)
            fc = func(xc)
            evals += 1
            if fc <= fr:
                pts[-1], vals[-1] = xc, fc
                continue
        else:
            xc = add(centroid, worst, rho)
            fc = func(xc)
            evals += 1
            if fc < vals[-1]:
                pts[-1], vals[-1] = xc, fc
                continue
        for i in range(1, dim + 1):
            pts[i] = add(pts[0], pts[i], sigma)
            vals[i] = func(pts[i])
        evals += dim

    return SimplexResult(pts[0], vals[0], evals, converged)
