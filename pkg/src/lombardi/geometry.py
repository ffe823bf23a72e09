"""Planar primitives for chords, tangent-constrained circular arcs and frame rotation.

Every function here is pure. Angles are radians, measured counterclockwise
from the positive x axis unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DegenerateGeometryError, DomainError, NearDegenerateArcError

TWO_PI = 2.0 * math.pi

# Below this |theta| the sin(theta)/theta ratios switch to their Taylor limit.
SERIES_CUTOFF = 1e-8
# Chords shorter than this (drawing units) are treated as coincident points.
DEGENERATE_CHORD = 1e-12
# Arcs whose tangent-chord angle comes within this of pi are refused.
NEAR_PI_MARGIN = 1e-6
# Tangent-chord angles at or below this are built as straight segments.
STRAIGHT_THETA = 1e-12


class Point(NamedTuple):
    x: float
    y: float

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __add__(self, other):
        return Point(self.x + other[0], self.y + other[1])

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


def distance(p1, p2) -> float:
    """Euclidean distance between two points."""
    return math.hypot(p1[0] - p2[0], p1[1] - p2[1])


def bearing(p0, p1) -> float:
    """Direction of the segment p0 -> p1, normalized to [0, 2*pi)."""
    return normalize_angle(math.atan2(p1[1] - p0[1], p1[0] - p0[0]))


def normalize_angle(a: float) -> float:
    """Map an angle into [0, 2*pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:  # fmod of a tiny negative number can round up to 2*pi
        a = 0.0
    return a


def angle_difference(a: float, b: float) -> float:
    """Smallest unsigned angle between two directions, in [0, pi]."""
    return abs(math.remainder(a - b, TWO_PI))


def gap_deviation(directions) -> float:
    """Largest deviation of consecutive angular gaps from the ideal 2*pi/d.

    ``directions`` are the d edge directions at one vertex; gaps are taken
    around the full circle, including the wraparound gap.
    """
    angles = sorted(normalize_angle(a) for a in directions)
    d = len(angles)
    if d < 2:
        return 0.0
    ideal = TWO_PI / d
    gaps = [angles[i + 1] - angles[i] for i in range(d - 1)]
    gaps.append(TWO_PI - angles[-1] + angles[0])
    return max(abs(g - ideal) for g in gaps)


def rotate_point(p, phi: float) -> Point:
    """Rotate ``p`` clockwise about the origin by ``phi``.

    Uses the matrix [[cos, sin], [-sin, cos]], so ``rotate_point((1, 0), pi/2)``
    gives ``(0, -1)``.
    """
    if not math.isfinite(phi):
        raise DomainError(f"rotation angle must be finite, got {phi!r}")
    c, s = math.cos(phi), math.sin(phi)
    x, y = p[0], p[1]
    return Point(x * c + y * s, -x * s + y * c)


def _sinc(theta: float) -> float:
    # sin(theta)/theta, with the series branch near zero
    if abs(theta) < SERIES_CUTOFF:
        return 1.0 - theta * theta / 6.0
    return math.sin(theta) / theta


def chord_from_arc(t: float, theta: float) -> float:
    """Chord length of an arc of length ``t`` whose tangent meets the chord at ``theta``."""
    if t < 0:
        raise DomainError(f"arc length must be non-negative, got {t!r}")
    if not (0.0 <= theta < math.pi):
        raise DomainError(f"tangent-chord angle must lie in (0, pi), got {theta!r}")
    return t * _sinc(theta)


def arc_from_chord(x: float, theta: float) -> float:
    """Arc length over a chord of length ``x`` with tangent-chord angle ``theta``.

    This is ``x * theta / sin(theta)``; ``theta == 0`` is the straight edge and
    returns ``x``. The value diverges as theta approaches pi.
    """
    if x < 0:
        raise DomainError(f"chord length must be non-negative, got {x!r}")
    if not (0.0 <= theta < math.pi):
        raise DomainError(f"tangent-chord angle must lie in [0, pi), got {theta!r}")
    if theta < SERIES_CUTOFF:
        return x * (1.0 + theta * theta / 6.0)
    return x * theta / math.sin(theta)


def point_to_line_distance(a, p0, pb) -> float:
    """Distance from ``a`` to the infinite line through ``p0`` and ``pb``."""
    dx, dy = pb[0] - p0[0], pb[1] - p0[1]
    length = math.hypot(dx, dy)
    if length <= DEGENERATE_CHORD:
        raise DegenerateGeometryError("line is defined by two coincident points")
    num = dx * (p0[1] - a[1]) - (p0[0] - a[0]) * dy
    return abs(num) / length


def tangent_perp_distance(rel, phi: float) -> float:
    """Distance from ``rel`` to the line through the origin with direction ``phi``.

    Written as |x sin(phi) - y cos(phi)|, which stays finite where tan(phi) does not.
    """
    return abs(rel[0] * math.sin(phi) - rel[1] * math.cos(phi))


def _signed_tangent_chord(p0, p1, phi: float) -> tuple[float, float]:
    # returns (chord length, signed angle from direction phi to the chord in (-pi, pi])
    cx, cy = p1[0] - p0[0], p1[1] - p0[1]
    chord = math.hypot(cx, cy)
    if chord <= DEGENERATE_CHORD:
        raise DegenerateGeometryError(f"coincident points {tuple(p0)} and {tuple(p1)}")
    ux, uy = math.cos(phi), math.sin(phi)
    cross = ux * cy - uy * cx
    dot = ux * cx + uy * cy
    return chord, math.atan2(cross, dot)


def tangent_chord_angle(p0, p1, phi: float) -> float:
    """Unsigned angle in [0, pi] between direction ``phi`` and the chord p0 -> p1."""
    return abs(_signed_tangent_chord(p0, p1, phi)[1])


@dataclass(frozen=True)
class ArcEdge:
    """Geometry of one drawn edge.

    The arc runs from ``start`` (the owner's position) to ``end`` and leaves
    ``start`` in direction ``owner_tangent``. Straight edges have no circle.
    """

    u: int
    v: int
    kind: str  # "straight" | "circular"
    start: Point
    end: Point
    arc_length: float
    owner: int
    owner_tangent: float
    tangent_chord_angle: float
    center: Optional[Point] = None
    radius: Optional[float] = None
    start_angle: Optional[float] = None
    end_angle: Optional[float] = None
    sweep_ccw: bool = False
    # set when the prescribed tangent was unusable and a chord was drawn instead
    fallback: bool = False
    # central angle swept from start to end; twice the tangent-chord angle
    sweep: float = 0.0

    @property
    def other(self) -> int:
        return self.v if self.owner == self.u else self.u

    def departure_angle(self, vertex: int) -> float:
        """Direction in which the edge leaves ``vertex``, normalized to [0, 2*pi)."""
        if vertex == self.owner:
            return normalize_angle(self.owner_tangent)
        if vertex != self.other:
            raise ValueError(f"vertex {vertex} is not an endpoint of edge ({self.u}, {self.v})")
        if self.kind == "straight":
            return bearing(self.end, self.start)
        rx, ry = self.end[0] - self.center[0], self.end[1] - self.center[1]
        # walking back toward the owner reverses the travel orientation
        if self.sweep_ccw:
            return normalize_angle(math.atan2(-rx, ry))
        return normalize_angle(math.atan2(rx, -ry))


def straight_edge(u: int, v: int, p_owner, p_other, owner: int) -> ArcEdge:
    """A straight segment owned by ``owner`` whose tangent lies along the chord."""
    p_owner, p_other = Point(*p_owner), Point(*p_other)
    return ArcEdge(
        u=u, v=v, kind="straight", start=p_owner, end=p_other,
        arc_length=distance(p_owner, p_other), owner=owner,
        owner_tangent=bearing(p_owner, p_other), tangent_chord_angle=0.0,
    )


def arc_through_tangent(p0, p1, phi: float, owner: int, other: Optional[int] = None) -> ArcEdge:
    """The unique circular arc from ``p0`` to ``p1`` that leaves ``p0`` in direction ``phi``.

    ``owner`` is the vertex id at ``p0``; ``other`` (default -1) the one at ``p1``.
    The edge's ``(u, v)`` are stored in ascending order.

    Raises NearDegenerateArcError when the chord points within 1e-6 of straight
    behind the tangent, and DegenerateGeometryError for coincident endpoints.
    """
    p0, p1 = Point(*p0), Point(*p1)
    other = -1 if other is None else other
    u, v = (owner, other) if owner <= other else (other, owner)
    chord, signed = _signed_tangent_chord(p0, p1, phi)
    theta = abs(signed)
    if theta >= math.pi - NEAR_PI_MARGIN:
        raise NearDegenerateArcError(
            f"tangent-chord angle {theta!r} too close to pi for an arc from {tuple(p0)}"
        )
    if theta <= STRAIGHT_THETA:
        return ArcEdge(
            u=u, v=v, kind="straight", start=p0, end=p1, arc_length=chord,
            owner=owner, owner_tangent=phi, tangent_chord_angle=0.0,
        )
    ccw = signed > 0.0
    radius = chord / (2.0 * math.sin(theta))
    # center sits on the normal to the tangent, on the side the arc turns toward
    if ccw:
        nx, ny = -math.sin(phi), math.cos(phi)
    else:
        nx, ny = math.sin(phi), -math.cos(phi)
    center = Point(p0.x + radius * nx, p0.y + radius * ny)
    return ArcEdge(
        u=u, v=v, kind="circular", start=p0, end=p1,
        arc_length=arc_from_chord(chord, theta), owner=owner, owner_tangent=phi,
        tangent_chord_angle=theta, center=center, radius=radius,
        start_angle=math.atan2(p0.y - center.y, p0.x - center.x),
        end_angle=math.atan2(p1.y - center.y, p1.x - center.x),
        sweep_ccw=ccw, sweep=2.0 * theta,
    )


def arc_residuals(arc: ArcEdge) -> dict:
    """Measured violations of the ArcEdge invariants.

    Keys: ``endpoint`` (distance off the circle / radius), ``tangent`` (rad),
    ``length`` (relative), ``sweep`` (stored sweep vs. end angles, rad).
    All zero for an exact arc.
    """
    if arc.kind == "straight":
        chord = distance(arc.start, arc.end)
        length_err = abs(arc.arc_length - chord) / max(chord, DEGENERATE_CHORD)
        tangent_err = angle_difference(arc.owner_tangent, bearing(arc.start, arc.end))
        return {"endpoint": 0.0, "tangent": tangent_err, "length": length_err, "sweep": 0.0}
    c, r = arc.center, arc.radius
    endpoint_err = max(abs(distance(arc.start, c) - r), abs(distance(arc.end, c) - r)) / r
    # direction of travel at the start, from the circle alone
    rx, ry = arc.start.x - c.x, arc.start.y - c.y
    travel = math.atan2(rx, -ry) if arc.sweep_ccw else math.atan2(-rx, ry)
    tangent_err = angle_difference(travel, arc.owner_tangent)
    # the stored sweep must agree with the stored end angles
    swept = arc.end_angle - arc.start_angle if arc.sweep_ccw else arc.start_angle - arc.end_angle
    sweep_err = angle_difference(swept, arc.sweep)
    length_err = abs(arc.arc_length - r * arc.sweep) / arc.arc_length
    return {"endpoint": endpoint_err, "tangent": tangent_err, "length": length_err,
            "sweep": sweep_err}
