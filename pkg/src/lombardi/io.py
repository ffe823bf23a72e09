"""Graph input parsing, drawing JSON (de)serialization and SVG rendering."""

from __future__ import annotations

import json
import math

from .errors import GraphError, ParseError
from .geometry import ArcEdge, Point
from .graph import Graph, Layout
from .layout_init import BoundarySpec


def parse_graph(data):
    """Parse an edge list or a JSON graph document.

    Returns ``(graph, boundary)``; ``boundary`` is None unless the JSON form
    carries one. The edge-list form infers ``n`` as the largest id plus one.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    if data.lstrip().startswith("{"):
        return _parse_json_graph(data)
    return _parse_edge_list(data), None


def _parse_edge_list(text: str) -> Graph:
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two vertex ids, got {raw.strip()!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"vertex ids must be integers, got {raw.strip()!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"vertex ids must be non-negative, got ({u}, {v})", lineno)
        if u == v:
            raise ParseError(f"self-loop ({u}, {v})", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge ({u}, {v}), first seen on line {seen[key]}", lineno)
        seen[key] = lineno
        edges.append((u, v))
    n = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edges(n, edges)


def _parse_json_graph(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise ParseError('JSON graph needs "n" and "edges"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f'"n" must be a non-negative integer, got {n!r}')
    edges = []
    for e in doc["edges"]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise ParseError(f"malformed edge {e!r}")
        edges.append((e[0], e[1]))
    g = Graph.from_edges(n, edges)
    boundary = None
    if doc.get("boundary") is not None:
        pinned = []
        for item in doc["boundary"]:
            if not (isinstance(item, list) and len(item) == 3):
                raise ParseError(f"malformed boundary entry {item!r}")
            v, x, y = item
            if not isinstance(v, int) or not 0 <= v < n:
                raise GraphError(f"boundary vertex {v!r} outside [0, {n})")
            pinned.append((v, Point(float(x), float(y))))
        boundary = BoundarySpec(pinned)
        boundary.validate(g)
    return g, boundary


def _finite_or_none(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, list):
        return [_finite_or_none(i) for i in x]
    if isinstance(x, dict):
        return {k: _finite_or_none(v) for k, v in x.items()}
    return x


def arc_to_dict(a: ArcEdge) -> dict:
    return {
        "u": a.u, "v": a.v, "kind": a.kind,
        "center": None if a.center is None else [a.center.x, a.center.y],
        "radius": a.radius, "start_angle": a.start_angle, "end_angle": a.end_angle,
        "ccw": a.sweep_ccw, "sweep": a.sweep, "arc_length": a.arc_length, "owner": a.owner,
        "owner_tangent": a.owner_tangent, "tangent_chord_angle": a.tangent_chord_angle,
        "start": [a.start.x, a.start.y], "end": [a.end.x, a.end.y], "fallback": a.fallback,
    }


def arc_from_dict(d: dict) -> ArcEdge:
    return ArcEdge(
        u=d["u"], v=d["v"], kind=d["kind"], start=Point(*d["start"]), end=Point(*d["end"]),
        arc_length=d["arc_length"], owner=d["owner"], owner_tangent=d["owner_tangent"],
        tangent_chord_angle=d["tangent_chord_angle"],
        center=None if d["center"] is None else Point(*d["center"]),
        radius=d["radius"], start_angle=d["start_angle"], end_angle=d["end_angle"],
        sweep_ccw=d["ccw"], fallback=d.get("fallback", False), sweep=d.get("sweep", 0.0),
    )


def drawing_to_json(layout: Layout, arcs, report: dict = None, config: dict = None,
                    **extra) -> str:
    """Serialize a drawing. Floats are written in shortest round-trip form."""
    doc = {
        "layout": [[p.x, p.y] for p in layout.positions],
        "arcs": [arc_to_dict(a) for a in arcs],
        "report": report or {},
        "config": config or {},
        **extra,
    }
    return json.dumps(_finite_or_none(doc), indent=1, allow_nan=False) + "\n"


def drawing_from_json(text: str):
    """Inverse of :func:`drawing_to_json`: returns ``(layout, arcs, document)``."""
    doc = json.loads(text)
    layout = Layout([tuple(p) for p in doc["layout"]])
    return layout, [arc_from_dict(a) for a in doc["arcs"]], doc


# --- SVG ---------------------------------------------------------------------

def _arc_extent(a: ArcEdge):
    pts = [a.start, a.end]
    if a.kind == "circular":
        c, r = a.center, a.radius
        for k in range(4):
            ang = k * math.pi / 2
            # offset of this axis-extreme point from the arc start, along the sweep
            off = (ang - a.start_angle) if a.sweep_ccw else (a.start_angle - ang)
            if off % (2 * math.pi) <= a.sweep:
                pts.append(Point(c.x + r * math.cos(ang), c.y + r * math.sin(ang)))
    return pts


def _num(x: float) -> str:
    x = x + 0.0  # drop negative zero
    return repr(x) if x != int(x) or abs(x) >= 1e16 else str(int(x))


def svg_document(layout: Layout, arcs) -> str:
    """Render the drawing as an SVG string.

    The y axis is flipped so counterclockwise in drawing coordinates is
    counterclockwise on screen.
    """
    pts = list(layout.positions)
    for a in arcs:
        pts.extend(_arc_extent(a))
    if pts:
        xmin, xmax = min(p.x for p in pts), max(p.x for p in pts)
        ymin, ymax = min(p.y for p in pts), max(p.y for p in pts)
    else:
        xmin = xmax = ymin = ymax = 0.0
    w, h = xmax - xmin, ymax - ymin
    size = max(w, h) or 1.0
    pad = 0.1 * size
    diag = math.hypot(w, h) or 1.0
    vb = (xmin - pad, -ymax - pad, w + 2 * pad, h + 2 * pad)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<svg xmlns="http://www.w3.org/2000/svg" viewBox="%s">' % " ".join(_num(v) for v in vb)]
    stroke = _num(0.003 * diag)
    out.append(f'<g fill="none" stroke="black" stroke-width="{stroke}">')
    for a in arcs:
        sx, sy, ex, ey = a.start.x, -a.start.y, a.end.x, -a.end.y
        if a.kind == "straight":
            out.append(f'<line x1="{_num(sx)}" y1="{_num(sy)}" x2="{_num(ex)}" y2="{_num(ey)}"/>')
        else:
            large = 1 if a.sweep > math.pi else 0
            sweep = 0 if a.sweep_ccw else 1
            r = _num(a.radius)
            out.append(f'<path d="M {_num(sx)} {_num(sy)} A {r} {r} 0 {large} {sweep} '
                       f'{_num(ex)} {_num(ey)}"/>')
    out.append("</g>")
    rad = _num(0.01 * diag)
    font = _num(0.025 * diag)
    out.append(f'<g fill="white" stroke="black" stroke-width="{stroke}">')
    for v, p in enumerate(layout.positions):
        out.append(f'<circle cx="{_num(p.x)}" cy="{_num(-p.y)}" r="{rad}"/>')
    out.append("</g>")
    out.append(f'<g font-size="{font}" font-family="sans-serif" fill="blue">')
    for v, p in enumerate(layout.positions):
        out.append(f'<text x="{_num(p.x + 0.012 * diag)}" y="{_num(-p.y - 0.012 * diag)}">{v}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(layout: Layout, arcs, path=None) -> str:
    doc = svg_document(layout, arcs)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(doc)
    return doc
