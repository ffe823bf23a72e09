"""Circular-arc graph drawings with perfect angular resolution.

Start from any straight-line drawing, then repeatedly give each vertex an
evenly spaced fan of edge tangents and move it to the position of least total
arc length.
"""

from .engine import (
    ChordFrame, RunReport, SolverConfig, TangentFan, build_tangent_fan, chord_frames,
    clockwise_neighbor_order, degree_ordering, farthest_neighbor, local_objective,
    minimize_vertex, rebuild_arcs, run,
)
from .errors import (
    DegenerateGeometryError, DomainError, GraphError, LombardiError, NearDegenerateArcError,
    ParseError,
)
from .geometry import (
    ArcEdge, Point, arc_from_chord, arc_through_tangent, chord_from_arc, point_to_line_distance,
    rotate_point, tangent_chord_angle, tangent_perp_distance,
)
from .graph import Graph, Layout
from .layout_init import BoundarySpec, fruchterman_reingold, pick_boundary, tutte_layout
from .metrics import (
    QualityReport, angular_resolution_deviation, force_residual, quality_report, total_arc_energy,
)

__version__ = "0.1.0"
