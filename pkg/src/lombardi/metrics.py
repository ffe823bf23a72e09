"""Drawing-quality measurements: angular resolution, arc energy, force residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .engine import SolverConfig, TangentFan, _min_chord, chord_frames, local_objective
from .errors import GraphError
from .geometry import angle_difference, distance, gap_deviation
from .graph import Graph, Layout


@dataclass
class QualityReport:
    angular_deviation: list = field(default_factory=list)  # per vertex, radians
    total_energy: float = 0.0
    chord_total: float = 0.0
    non_owner_residual: list = field(default_factory=list)  # per edge, radians
    max_force_residual: float = 0.0
    force_residual: list = field(default_factory=list)  # per vertex; None when not defined

    def to_dict(self) -> dict:
        return {
            "angular_deviation": list(self.angular_deviation),
            "total_energy": self.total_energy,
            "chord_total": self.chord_total,
            "non_owner_residual": list(self.non_owner_residual),
            "max_force_residual": self.max_force_residual,
            "force_residual": list(self.force_residual),
        }


def angular_resolution_deviation(v: int, arcs, layout: Layout = None) -> float:
    """Max |gap - 2*pi/d| between consecutive edge directions at ``v``.

    Edges owned by ``v`` contribute their prescribed tangent; the rest
    contribute the direction in which their arc actually leaves ``v``.
    """
    dirs = [a.departure_angle(v) for a in arcs if v in (a.u, a.v)]
    if not dirs:
        raise GraphError(f"vertex {v} has no incident arcs")
    return gap_deviation(dirs)


def total_arc_energy(arcs) -> float:
    return math.fsum(a.arc_length for a in arcs)


def force_residual(v: int, layout: Layout, fan: TangentFan, cfg: SolverConfig = None) -> float:
    """Norm of the central-difference gradient of the local energy at ``v``'s position.

    The step is 1e-6 times the mean chord to the fan's neighbors. Raises
    DegenerateGeometryError when a neighbor sits on ``v``.
    """
    p = layout[v]
    chord_frames(p, fan, layout, _min_chord(cfg))
    h = 1e-6 * sum(distance(p, layout[u]) for u in fan.neighbors) / fan.degree

    def e(x, y):
        return local_objective((x, y), fan, layout, cfg)

    gx = (e(p.x + h, p.y) - e(p.x - h, p.y)) / (2 * h)
    gy = (e(p.x, p.y + h) - e(p.x, p.y - h)) / (2 * h)
    return math.hypot(gx, gy)


def non_owner_residual(arc, fans: dict) -> float:
    """Angle between where ``arc`` leaves its non-owner endpoint and the direction
    that endpoint's own fan prescribed for it. Zero when the non-owner has no fan."""
    other = arc.other
    fan = fans.get(other)
    if fan is None or arc.owner not in fan.neighbors:
        return 0.0
    return angle_difference(arc.departure_angle(other), fan.angle_for(arc.owner))


def quality_report(g: Graph, layout: Layout, arcs, fans: dict,
                   cfg: SolverConfig = None) -> QualityReport:
    """Measure a finished drawing. ``fans`` maps each vertex to its latest tangent fan."""
    by_vertex = {v: [] for v in range(g.n)}
    for a in arcs:
        by_vertex[a.u].append(a)
        by_vertex[a.v].append(a)
    dev = [angular_resolution_deviation(v, by_vertex[v]) if g.degree(v) >= 2 else 0.0
           for v in range(g.n)]
    forces = []
    for v in range(g.n):
        fan = fans.get(v)
        if fan is None or g.degree(v) < 2:
            forces.append(None)
            continue
        try:
            forces.append(force_residual(v, layout, fan, cfg))
        except ValueError:  # a neighbor sits on v
            forces.append(None)
    finite = [f for f in forces if f is not None and math.isfinite(f)]
    return QualityReport(
        angular_deviation=dev,
        total_energy=total_arc_energy(arcs),
        chord_total=math.fsum(distance(layout[a.u], layout[a.v]) for a in arcs),
        non_owner_residual=[non_owner_residual(a, fans) for a in arcs],
        max_force_residual=max(finite, default=0.0),
        force_residual=forces,
    )
