"""Simple undirected graphs and vertex placements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphError
from .geometry import Point


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adjacency[v]`` is the ascending tuple of neighbors of ``v``. Build with
    :meth:`from_edges` to get validation.
    """

    n: int
    adjacency: tuple

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has an id outside [0, {n})")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def edges(self) -> list:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def components(self) -> list:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1


@dataclass
class Layout:
    """One position per vertex."""

    positions: list = field(default_factory=list)

    def __post_init__(self):
        self.positions = [Point(float(p[0]), float(p[1])) for p in self.positions]
        for v, p in enumerate(self.positions):
            if not p.is_finite():
                raise GraphError(f"vertex {v} has a non-finite position {tuple(p)}")

    def __getitem__(self, v: int) -> Point:
        return self.positions[v]

    def __len__(self) -> int:
        return len(self.positions)

    def copy(self) -> "Layout":
        return Layout(list(self.positions))

    def bounding_box(self):
        """``(xmin, ymin, xmax, ymax)``; all zeros for an empty layout."""
        if not self.positions:
            return (0.0, 0.0, 0.0, 0.0)
        xs = [p.x for p in self.positions]
        ys = [p.y for p in self.positions]
        return (min(xs), min(ys), max(xs), max(ys))

    def diagonal(self) -> float:
        x0, y0, x1, y1 = self.bounding_box()
        return math.hypot(x1 - x0, y1 - y0)
