"""Simple undirected graphs with canonical 0-based vertex indexing.

Graph equality is equality of (vertex count, sorted edge set); isomorphism
testing lives in :mod:`wlspectra.homs` as a small-instance oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


def _normalise_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``. No loops, no multiedges."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u} not allowed")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range or not normalised")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(n, frozenset(_normalise_edge(u, v) for u, v in edges))

    @cached_property
    def neighbours(self) -> tuple[frozenset[int], ...]:
        nbr: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbr[u].add(v)
            nbr[v].add(u)
        return tuple(frozenset(s) for s in nbr)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.neighbours[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(self.neighbours[v]) for v in range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under the vertex permutation ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation of the vertex set")
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def connected_components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbours[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def induced_subgraph(self, vertices: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph plus the old-to-new vertex index map."""
        order = list(vertices)
        index = {v: i for i, v in enumerate(order)}
        edges = [
            (index[u], index[v])
            for u, v in self.edges
            if u in index and v in index
        ]
        return Graph.from_edges(len(order), edges), index

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class VertexColouredGraph:
    """Graph with a vertex colouring whose ids are contiguous ``0..c-1``."""

    graph: Graph
    colours: tuple[int, ...]

    def __post_init__(self):
        if len(self.colours) != self.graph.n:
            raise ValueError("colour sequence length must equal vertex count")
        if self.colours:
            used = set(self.colours)
            if used != set(range(len(used))):
                raise ValueError("colour ids must be contiguous 0..c-1")

    @property
    def num_colours(self) -> int:
        return len(set(self.colours))


def uncoloured(g: Graph) -> VertexColouredGraph:
    return VertexColouredGraph(g, (0,) * g.n)


def individualise(g: Graph, v: int) -> VertexColouredGraph:
    """Colour ``v`` with 1 and every other vertex with 0."""
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} out of range for graph on {g.n} vertices")
    if g.n == 1:
        # degenerate single-vertex graph: the one vertex is the sole class
        return VertexColouredGraph(g, (0,))
    return VertexColouredGraph(g, tuple(1 if w == v else 0 for w in range(g.n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    """Star with centre 0 and the given number of leaves."""
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def disjoint_union(g1: Graph, g2: Graph) -> tuple[Graph, int]:
    """Disjoint union with g2's vertices shifted; returns (graph, offset)."""
    offset = g1.n
    edges = list(g1.edges) + [(u + offset, v + offset) for u, v in g2.edges]
    return Graph.from_edges(g1.n + g2.n, edges), offset


def two_triangles() -> Graph:
    g, _ = disjoint_union(cycle_graph(3), cycle_graph(3))
    return g


def _gadget_edges(kind: str, base: int) -> list[tuple[int, int]]:
    if kind == "sixcycle":
        return [(base + i, base + (i + 1) % 6) for i in range(6)]
    if kind == "twotriangles":
        return [
            (base, base + 1), (base + 1, base + 2), (base, base + 2),
            (base + 3, base + 4), (base + 4, base + 5), (base + 3, base + 5),
        ]
    raise ValueError(kind)


def _backbone_with_gadgets(order: list[str]) -> Graph:
    # backbone 4-cycle on 0..3, then gadgets of 6 vertices each in
    # attachment order; every gadget vertex is joined to its backbone vertex
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    base = 4
    for anchor, kind in enumerate(order):
        edges.extend(_gadget_edges(kind, base))
        edges.extend((anchor, base + i) for i in range(6))
        base += 6
    return Graph.from_edges(base, edges)


def build_counterexample_pair() -> tuple[Graph, Graph]:
    """28-vertex pair separating (1,1)-WL from 2-WL.

    Both graphs consist of a backbone 4-cycle whose vertices each point to a
    6-vertex gadget (a six-cycle X or two disjoint triangles Y).  In the first
    graph the cyclic arrangement is X,X,Y,Y; in the second it is X,Y,X,Y.
    Vertex order is fixed: backbone 0-3, then gadgets in attachment order.
    """
    g = _backbone_with_gadgets(["sixcycle", "sixcycle", "twotriangles", "twotriangles"])
    h = _backbone_with_gadgets(["sixcycle", "twotriangles", "sixcycle", "twotriangles"])
    return g, h
