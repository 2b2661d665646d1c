"""Homomorphism counting and the bilabelled-graph algebra.

Includes exact homomorphism counts (backtracking with a forest fast path),
homomorphism matrices and vectors of (bi)labelled graphs, series composition
and gluing with loop guards, the contracted-forest pattern class with its
five composition generators, and a brute-force isomorphism oracle for small
instances.  Matrix rows/columns are indexed lexicographically over vertex
tuples so that matrices are comparable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import CompositionError, SizeCapError
from .graphs import Graph, disjoint_union
from .rational import solve_affine_int

DEFAULT_PATTERN_CAP = 10
DEFAULT_TPLUS_CAP = 8
DEFAULT_ISO_CAP = 10


# ---------------------------------------------------------------------------
# homomorphism counting

def is_forest(g: Graph) -> bool:
    # acyclic iff every component has exactly (size - 1) edges
    return g.num_edges == g.n - len(g.connected_components())


def _connectivity_order(g: Graph, comp: Sequence[int]) -> list[int]:
    """Order the component so every later vertex has an earlier neighbour."""
    start = max(comp, key=lambda v: g.degree(v))
    order = [start]
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop(0)
        for w in sorted(g.neighbours[v]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                frontier.append(w)
    return order


def _backtrack_component(pattern: Graph, order: Sequence[int], target: Graph) -> int:
    pos = {v: i for i, v in enumerate(order)}
    earlier = [
        [pos[w] for w in pattern.neighbours[v] if pos[w] < pos[v]]
        for v in order
    ]
    image = [0] * len(order)
    nbrs = target.neighbours

    def count_from(i: int) -> int:
        if i == len(order):
            return 1
        anchors = earlier[i]
        if not anchors:
            candidates = range(target.n)
        else:
            candidates = nbrs[image[anchors[0]]]
            for a in anchors[1:]:
                candidates = [c for c in candidates if c in nbrs[image[a]]]
        total = 0
        for c in candidates:
            image[i] = c
            total += count_from(i + 1)
        return total

    return count_from(0)


def _tree_hom(pattern: Graph, comp: Sequence[int], target: Graph,
              allowed: Optional[dict[int, frozenset[int]]] = None) -> int:
    """Dynamic program over a tree component; ``allowed`` restricts images."""
    root = comp[0]
    order = []
    parent = {root: None}
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in pattern.neighbours[v]:
            if w not in parent:
                parent[w] = v
                stack.append(w)
    table: dict[int, list[int]] = {}
    for v in reversed(order):
        ok = allowed.get(v) if allowed else None
        counts = []
        children = [w for w in pattern.neighbours[v] if parent.get(w) == v]
        for x in range(target.n):
            if ok is not None and x not in ok:
                counts.append(0)
                continue
            c = 1
            for w in children:
                s = sum(table[w][y] for y in target.neighbours[x])
                if s == 0:
                    c = 0
                    break
                c *= s
            counts.append(c)
        table[v] = counts
    return sum(table[root])


def hom_count(pattern: Graph, target: Graph, pattern_cap: int = DEFAULT_PATTERN_CAP) -> int:
    """Exact number of homomorphisms from pattern to target."""
    if pattern.n > pattern_cap:
        raise SizeCapError(f"pattern on {pattern.n} vertices exceeds cap {pattern_cap}")
    if pattern.n == 0:
        return 1
    if target.n == 0:
        return 0
    total = 1
    for comp in pattern.connected_components():
        if len(comp) == 1:
            total *= target.n
            continue
        sub, _ = pattern.induced_subgraph(comp)
        if is_forest(sub):
            total *= _tree_hom(sub, list(range(sub.n)), target)
        else:
            order = _connectivity_order(sub, list(range(sub.n)))
            total *= _backtrack_component(sub, order, target)
    return total


def hom_count_bruteforce(pattern: Graph, target: Graph) -> int:
    """Oracle: enumerate every map V(pattern) -> V(target)."""
    if target.n ** pattern.n > 10 ** 7:
        raise SizeCapError("brute-force enumeration too large")
    count = 0
    edges = pattern.sorted_edges
    for image in product(range(target.n), repeat=pattern.n):
        if all(target.has_edge(image[u], image[v]) for u, v in edges):
            count += 1
    return count


# ---------------------------------------------------------------------------
# labelled and bilabelled graphs

@dataclass(frozen=True)
class LabelledGraph:
    """Graph with one ordered tuple of labelled vertices (repeats allowed)."""

    graph: Graph
    labels: tuple[int, ...]

    def __post_init__(self):
        for v in self.labels:
            if not (0 <= v < self.graph.n):
                raise ValueError(f"label vertex {v} out of range")

    @property
    def arity(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class BilabelledGraph:
    """Graph with ordered in- and out-label tuples; realises a homomorphism matrix."""

    graph: Graph
    labels_in: tuple[int, ...]
    labels_out: tuple[int, ...]

    def __post_init__(self):
        for v in self.labels_in + self.labels_out:
            if not (0 <= v < self.graph.n):
                raise ValueError(f"label vertex {v} out of range")

    @property
    def in_arity(self) -> int:
        return len(self.labels_in)

    @property
    def out_arity(self) -> int:
        return len(self.labels_out)


def _enumerate_homs(pattern: Graph, target: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism as an image tuple, in lexicographic vertex order."""
    if pattern.n == 0:
        yield ()
        return
    order = []
    seen = set()
    for comp in pattern.connected_components():
        order.extend(_connectivity_order(pattern, comp))
    pos = {v: i for i, v in enumerate(order)}
    earlier = [
        [pos[w] for w in pattern.neighbours[v] if pos[w] < pos[v]]
        for v in order
    ]
    image = [0] * len(order)
    nbrs = target.neighbours

    def rec(i: int):
        if i == len(order):
            out = [0] * pattern.n
            for idx, v in enumerate(order):
                out[v] = image[idx]
            yield tuple(out)
            return
        anchors = earlier[i]
        if not anchors:
            candidates = range(target.n)
        else:
            candidates = nbrs[image[anchors[0]]]
            for a in anchors[1:]:
                candidates = [c for c in candidates if c in nbrs[image[a]]]
        for c in candidates:
            image[i] = c
            yield from rec(i + 1)

    yield from rec(0)


def tuple_rank(tup: Sequence[int], n: int) -> int:
    r = 0
    for v in tup:
        r = r * n + v
    return r


def hom_vector(f: LabelledGraph, g: Graph, cap: int = 10 ** 6) -> np.ndarray:
    k = f.arity
    if g.n ** k > cap:
        raise SizeCapError("hom vector index space too large")
    out = np.zeros(g.n ** k, dtype=np.int64)
    for image in _enumerate_homs(f.graph, g):
        out[tuple_rank([image[v] for v in f.labels], g.n)] += 1
    return out


def hom_matrix(f: BilabelledGraph, g: Graph, cap: int = 10 ** 6) -> np.ndarray:
    """Exact integer homomorphism matrix over V(g)^k x V(g)^l, lexicographic."""
    k, l = f.in_arity, f.out_arity
    if g.n ** k * max(g.n ** l, 1) > cap or g.n ** max(k, l) > cap:
        raise SizeCapError("hom matrix index space too large")
    out = np.zeros((g.n ** k, g.n ** l), dtype=np.int64)
    for image in _enumerate_homs(f.graph, g):
        r = tuple_rank([image[v] for v in f.labels_in], g.n)
        c = tuple_rank([image[v] for v in f.labels_out], g.n)
        out[r, c] += 1
    return out


# ---------------------------------------------------------------------------
# composition operations

def glue_graphs(
    g1: Graph, g2: Graph, pairs: Sequence[tuple[int, int]]
) -> tuple[Graph, list[int], list[int]]:
    """Disjoint union with the given (v in g1, w in g2) identifications.

    Returns the glued graph plus vertex maps for both inputs.  Raises if an
    identification would turn an edge into a loop.
    """
    total = g1.n + g2.n
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, w in pairs:
        a, b = find(v), find(g1.n + w)
        if a != b:
            parent[max(a, b)] = min(a, b)

    reps = sorted({find(x) for x in range(total)})
    index = {r: i for i, r in enumerate(reps)}
    map1 = [index[find(v)] for v in range(g1.n)]
    map2 = [index[find(g1.n + w)] for w in range(g2.n)]
    edges = set()
    for u, v in g1.edges:
        a, b = map1[u], map1[v]
        if a == b:
            raise CompositionError(f"identification creates a loop at merged vertex {a}")
        edges.add((min(a, b), max(a, b)))
    for u, v in g2.edges:
        a, b = map2[u], map2[v]
        if a == b:
            raise CompositionError(f"identification creates a loop at merged vertex {a}")
        edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(len(reps), edges), map1, map2


def series_compose(f1: BilabelledGraph, f2: BilabelledGraph) -> BilabelledGraph:
    """Identify the out-labels of f1 with the in-labels of f2 positionwise."""
    if f1.out_arity != f2.in_arity:
        raise CompositionError(
            f"out-arity {f1.out_arity} does not match in-arity {f2.in_arity}"
        )
    glued, map1, map2 = glue_graphs(
        f1.graph, f2.graph, list(zip(f1.labels_out, f2.labels_in))
    )
    return BilabelledGraph(
        glued,
        tuple(map1[v] for v in f1.labels_in),
        tuple(map2[v] for v in f2.labels_out),
    )


def reverse(f: BilabelledGraph) -> BilabelledGraph:
    return BilabelledGraph(f.graph, f.labels_out, f.labels_in)


def gluing_product(f1: LabelledGraph, f2: LabelledGraph) -> LabelledGraph:
    """Identify the label tuples positionwise; hom vectors multiply entrywise."""
    if f1.arity != f2.arity:
        raise CompositionError("gluing requires equal label arities")
    glued, map1, _ = glue_graphs(f1.graph, f2.graph, list(zip(f1.labels, f2.labels)))
    return LabelledGraph(glued, tuple(map1[v] for v in f1.labels))


# ---------------------------------------------------------------------------
# contracted-forest patterns

@dataclass(frozen=True)
class TPlusPattern:
    """A forest with a non-empty vertex subset contracted to a single vertex."""

    forest: Graph
    contracted: frozenset[int]
    labels: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if not self.contracted:
            raise ValueError("contracted set must be non-empty")
        if not is_forest(self.forest):
            raise ValueError("pattern base must be a forest")
        for v in self.contracted:
            if not (0 <= v < self.forest.n):
                raise ValueError(f"contracted vertex {v} out of range")

    @cached_property
    def contracted_graph(self) -> Graph:
        return contract_vertices(self.forest, self.contracted)


def contract_vertices(g: Graph, block: frozenset[int]) -> Graph:
    """Contract the block to vertex 0, dropping loops and multiedges."""
    rest = [v for v in range(g.n) if v not in block]
    index = {v: i + 1 for i, v in enumerate(rest)}
    mapped = lambda v: 0 if v in block else index[v]
    edges = set()
    for u, v in g.edges:
        a, b = mapped(u), mapped(v)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(len(rest) + 1, edges)


def hom_count_tplus(pattern: TPlusPattern, target: Graph) -> int:
    """hom(T/B, target): sum over images of the contracted vertex of a
    forest dynamic program on T minus B with adjacency side conditions."""
    forest = pattern.forest
    block = pattern.contracted
    rest = [v for v in range(forest.n) if v not in block]
    if not rest:
        return target.n
    sub, index = forest.induced_subgraph(rest)
    pinned = {
        index[v]
        for v in rest
        if any(w in block for w in forest.neighbours[v])
    }
    comps = sub.connected_components()
    total = 0
    for x in range(target.n):
        allowed = {v: target.neighbours[x] for v in pinned}
        prod = 1
        for comp in comps:
            prod *= _tree_hom(sub, comp, target, allowed)
            if prod == 0:
                break
        total += prod
    return total


def _trees_up_to(n: int) -> list[list[Graph]]:
    """trees_by_size[s] = trees on s vertices up to isomorphism (s >= 1)."""
    by_size: list[list[Graph]] = [[], [Graph(1, frozenset())]]
    for size in range(2, n + 1):
        found: list[Graph] = []
        for smaller in by_size[size - 1]:
            for anchor in range(smaller.n):
                edges = list(smaller.edges) + [(anchor, smaller.n)]
                candidate = Graph.from_edges(smaller.n + 1, edges)
                if not any(brute_isomorphic(candidate, t) for t in found):
                    found.append(candidate)
        by_size.append(found)
    return by_size


def _forests_up_to(max_n: int) -> list[Graph]:
    trees = _trees_up_to(max_n)
    forests: list[Graph] = []

    def extend(base: Optional[Graph], last_size: int, last_index: int, budget: int):
        if base is not None:
            forests.append(base)
        for size in range(1, budget + 1):
            for idx, tree in enumerate(trees[size]):
                if size < last_size or (size == last_size and idx < last_index):
                    continue  # keep tree multisets canonical and duplicate-free
                if base is None:
                    combined = tree
                else:
                    combined, _ = disjoint_union(base, tree)
                extend(combined, size, idx, budget - size)

    extend(None, 1, 0, max_n)
    return forests


def _iso_signature(g: Graph) -> tuple:
    return (g.n, g.num_edges, tuple(sorted(g.degrees)))


def enumerate_tplus(
    max_vertices: int, cap: int = DEFAULT_TPLUS_CAP
) -> Iterator[TPlusPattern]:
    """All contracted-forest patterns from forests on at most ``max_vertices``
    vertices, with isomorphic contracted graphs deduplicated."""
    if max_vertices > cap:
        raise SizeCapError(f"pattern bound {max_vertices} exceeds cap {cap}")
    seen: dict[tuple, list[Graph]] = {}
    for forest in _forests_up_to(max_vertices):
        vertices = list(range(forest.n))
        for mask in range(1, 1 << forest.n):
            block = frozenset(v for v in vertices if mask & (1 << v))
            pattern = TPlusPattern(forest, block)
            contracted = pattern.contracted_graph
            sig = _iso_signature(contracted)
            bucket = seen.setdefault(sig, [])
            if any(brute_isomorphic(contracted, other) for other in bucket):
                continue
            bucket.append(contracted)
            yield pattern


@dataclass(frozen=True)
class TPlusVerdict:
    equal_up_to_bound: bool
    bound: int
    witness: Optional[TPlusPattern] = None
    counts: Optional[tuple[int, int]] = None


def hom_indist_tplus(g: Graph, h: Graph, max_vertices: int,
                     cap: int = DEFAULT_TPLUS_CAP) -> TPlusVerdict:
    """Compare hom counts over every contracted-forest pattern up to the bound."""
    for pattern in enumerate_tplus(max_vertices, cap):
        cg = hom_count_tplus(pattern, g)
        ch = hom_count_tplus(pattern, h)
        if cg != ch:
            return TPlusVerdict(False, max_vertices, pattern, (cg, ch))
    return TPlusVerdict(True, max_vertices)


# ---------------------------------------------------------------------------
# the five (2,2)-bilabelled composition generators

def appendixB_generators() -> dict[str, BilabelledGraph]:
    """Identity, connect, forget, edge, and merge graphs for the contracted-
    forest class; the first labelled vertex is fixed by series composition."""
    identity = BilabelledGraph(Graph(2, frozenset()), (0, 1), (0, 1))
    connect = BilabelledGraph(Graph.from_edges(3, [(1, 2)]), (0, 1), (0, 2))
    forget = BilabelledGraph(Graph(3, frozenset()), (0, 1), (0, 2))
    edge = BilabelledGraph(Graph.from_edges(2, [(0, 1)]), (0, 1), (0, 1))
    merge = BilabelledGraph(Graph(1, frozenset()), (0, 0), (0, 0))
    return {"I": identity, "C": connect, "F": forget, "E": edge, "M": merge}


# ---------------------------------------------------------------------------
# brute-force isomorphism oracle

def brute_isomorphic(g: Graph, h: Graph, cap: int = DEFAULT_ISO_CAP) -> bool:
    """Exact isomorphism decision by permutation search with degree pruning."""
    if g.n > cap or h.n > cap:
        raise SizeCapError(f"isomorphism oracle capped at {cap} vertices")
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    if sorted(g.degrees) != sorted(h.degrees):
        return False
    n = g.n
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    image = [-1] * n
    used = [False] * n

    def rec(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or h.degree(w) != g.degree(v):
                continue
            ok = True
            for j in range(i):
                u = order[j]
                if g.has_edge(v, u) != h.has_edge(w, image[u]):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                if rec(i + 1):
                    return True
                used[w] = False
                image[v] = -1
        return False

    return rec(0)


# ---------------------------------------------------------------------------
# affine necessary-condition probe for the contracted-forest matrix equation

def tplus_intertwiner_probe(g: Graph, h: Graph, cap: int = 5) -> bool:
    """Decide exactly whether the affine system X B_G = B_H X (over the five
    generators) plus row/column sums one admits a rational solution.

    This drops the non-negativity half of double stochasticity, so it is a
    necessary condition only.
    """
    if g.n > cap or h.n > cap:
        raise SizeCapError(f"intertwiner probe capped at {cap} vertices")
    dim_g = g.n ** 2
    dim_h = h.n ** 2
    num_vars = dim_h * dim_g
    var = lambda r, c: r * dim_g + c

    rows: list[tuple[dict[int, int], int]] = []
    for big in appendixB_generators().values():
        bg = hom_matrix(big, g)
        bh = hom_matrix(big, h)
        for r in range(dim_h):
            for c in range(dim_g):
                coeffs: dict[int, int] = {}
                for q in range(dim_g):
                    if bg[q, c]:
                        coeffs[var(r, q)] = coeffs.get(var(r, q), 0) + int(bg[q, c])
                for s in range(dim_h):
                    if bh[r, s]:
                        coeffs[var(s, c)] = coeffs.get(var(s, c), 0) - int(bh[r, s])
                coeffs = {k: v for k, v in coeffs.items() if v}
                if coeffs:
                    rows.append((coeffs, 0))
    for r in range(dim_h):
        rows.append(({var(r, c): 1 for c in range(dim_g)}, 1))
    for c in range(dim_g):
        rows.append(({var(r, c): 1 for r in range(dim_h)}, 1))
    return solve_affine_int(num_vars, rows) is not None
