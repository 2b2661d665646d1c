"""Colour-refinement engines: 1-WL, k-WL after d iterations, and (1,1)-WL.

Colour ids are always assigned by sorting the distinct refinement signatures
of a round and ranking them, never by hashing, so runs are bit-reproducible
and collision-free.  Cross-graph comparability is obtained by refining over
the disjoint union of the tuple universes of all participating graphs.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .errors import SizeCapError
from .graphs import Graph, VertexColouredGraph, individualise

DEFAULT_TUPLE_CAP = 10 ** 6


# ---------------------------------------------------------------------------
# atomic types

@dataclass(frozen=True)
class AtomicType:
    """Isomorphism type of a vertex tuple: equality pattern plus edge pattern.

    ``equality`` maps each position to the first position holding the same
    vertex (0-based).  ``edges`` lists position pairs (i, j), i < j, whose
    vertices are adjacent.  Two tuples have equal atomic type exactly when
    the positionwise map between them is a partial isomorphism.
    """

    equality: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def equality_classes(self) -> frozenset[frozenset[int]]:
        """Equality partition with 1-based positions, matching display conventions."""
        groups: dict[int, set[int]] = {}
        for i, rep in enumerate(self.equality):
            groups.setdefault(rep, set()).add(i + 1)
        return frozenset(frozenset(s) for s in groups.values())

    def edge_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((i + 1, j + 1) for i, j in self.edges)

    def key(self) -> tuple:
        return (self.equality, self.edges)


def atp(g: Graph, tup: Sequence[int]) -> AtomicType:
    """Atomic type of a vertex tuple; invariant under graph automorphisms."""
    for v in tup:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range")
    first: dict[int, int] = {}
    equality = []
    for i, v in enumerate(tup):
        equality.append(first.setdefault(v, i))
    edges = tuple(
        (i, j)
        for i in range(len(tup))
        for j in range(i + 1, len(tup))
        if g.has_edge(tup[i], tup[j])
    )
    return AtomicType(tuple(equality), edges)


def _atp_key(g: Graph, tup: tuple[int, ...]) -> tuple:
    first: dict[int, int] = {}
    equality = []
    for i, v in enumerate(tup):
        equality.append(first.setdefault(v, i))
    n = len(tup)
    bits = 0
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            if g.has_edge(tup[i], tup[j]):
                bits |= 1 << pos
            pos += 1
    return (tuple(equality), bits)


def _rank(values) -> dict:
    return {v: i for i, v in enumerate(sorted(set(values)))}


# ---------------------------------------------------------------------------
# colourings and verdicts

@dataclass(frozen=True)
class Colouring:
    """Canonical partition of the arity-k tuples of a graph into colour classes."""

    arity: int
    colour: dict[tuple[int, ...], int]
    num_classes: int

    def of(self, *vertices: int) -> int:
        return self.colour[tuple(vertices)]

    def histogram(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(self.colour.values()).items()))

    def classes(self) -> dict[int, list[tuple[int, ...]]]:
        out: dict[int, list[tuple[int, ...]]] = {}
        for tup, c in sorted(self.colour.items()):
            out.setdefault(c, []).append(tup)
        return out


@dataclass(frozen=True)
class WlVerdict:
    indistinguishable: bool
    iterations_used: int
    witness: Optional[tuple] = None

    def __post_init__(self):
        if self.indistinguishable and self.witness is not None:
            raise ValueError("witness only allowed for distinguishable verdicts")
        if not self.indistinguishable and self.witness is None:
            raise ValueError("distinguishable verdict requires a witness")


# ---------------------------------------------------------------------------
# joint 1-WL over a family of coloured graphs

def joint_colour_refinement(
    family: Sequence[VertexColouredGraph],
    max_iters: Optional[int] = None,
) -> tuple[list[list[int]], int, int]:
    """Refine all graphs of the family in one shared colour space.

    Input colour values are taken as globally meaningful across the family.
    Returns (per-graph stable colour lists, rounds executed, class count).
    Each round either strictly refines the joint partition or terminates.
    """
    colours = [list(vcg.colours) for vcg in family]
    rank0 = _rank(c for cs in colours for c in cs)
    colours = [[rank0[c] for c in cs] for cs in colours]
    num_classes = len(rank0)
    total = sum(vcg.graph.n for vcg in family)
    rounds = 0
    while True:
        if max_iters is not None and rounds >= max_iters:
            break
        sigs = []
        for gi, vcg in enumerate(family):
            g = vcg.graph
            cs = colours[gi]
            sigs.append([
                (cs[v], tuple(sorted(cs[w] for w in g.neighbours[v])))
                for v in range(g.n)
            ])
        ranks = _rank(s for gs in sigs for s in gs)
        colours = [[ranks[s] for s in gs] for gs in sigs]
        rounds += 1
        if len(ranks) == num_classes:
            break
        num_classes = len(ranks)
        if rounds > total + 1:
            raise AssertionError("1-WL failed to stabilise within the vertex bound")
    return colours, rounds, num_classes


def wl1_refine(
    g: VertexColouredGraph, max_iters: Optional[int] = None
) -> tuple[Colouring, int]:
    """Classic colour refinement from the given initial colours to stability."""
    colours, rounds, num_classes = joint_colour_refinement([g], max_iters)
    mapping = {(v,): c for v, c in enumerate(colours[0])}
    return Colouring(1, mapping, num_classes), rounds


# ---------------------------------------------------------------------------
# joint k-WL over a family of graphs

def _check_tuple_cap(graphs: Sequence[Graph], k: int, cap: int) -> None:
    for g in graphs:
        if g.n ** k > cap:
            raise SizeCapError(
                f"n^k = {g.n}^{k} exceeds the tuple cap {cap}; "
                "raise the cap explicitly to proceed"
            )


def _joint_wlk(
    graphs: Sequence[Graph],
    k: int,
    d: Optional[float],
    cap: int,
) -> tuple[list[list[int]], int, int]:
    """k-WL refinement over the disjoint union of tuple universes.

    ``d`` is the iteration budget (None or ``math.inf`` means run to
    stability).  Tuples are indexed by their base-n rank in lexicographic
    order.  Returns (per-graph colour arrays, rounds executed, class count).
    """
    if k < 1:
        raise ValueError("arity k must be at least 1")
    _check_tuple_cap(graphs, k, cap)
    if d is not None and d is not math.inf and d < 0:
        raise ValueError("iteration count d must be non-negative")

    ns = [g.n for g in graphs]
    tuple_lists = [list(product(range(n), repeat=k)) for n in ns]

    # initial colours: atomic types of the k-tuples, ranked jointly
    init_keys = [[_atp_key(g, t) for t in tuples] for g, tuples in zip(graphs, tuple_lists)]
    ranks = _rank(key for keys in init_keys for key in keys)
    colours = [[ranks[key] for key in keys] for keys in init_keys]
    num_classes = len(ranks)

    budget = None if d is None or d is math.inf else int(d)
    if budget == 0 or all(n == 0 for n in ns):
        return colours, 0, num_classes

    # atomic types of the extended (k+1)-tuples are static across rounds
    ext_keys = [
        [_atp_key(g, t + (w,)) for t in tuples for w in range(g.n)]
        for g, tuples in zip(graphs, tuple_lists)
    ]
    ext_rank = _rank(key for keys in ext_keys for key in keys)
    ext = [[ext_rank[key] for key in keys] for keys in ext_keys]

    # substitution v[i/w] by rank arithmetic: rank = sum v_i * n^(k-1-i)
    powers = [[n ** (k - 1 - i) for i in range(k)] for n in ns]

    total_tuples = sum(n ** k for n in ns)
    rounds = 0
    while True:
        sigs = []
        for gi, n in enumerate(ns):
            cs = colours[gi]
            ex = ext[gi]
            pw = powers[gi]
            tuples = tuple_lists[gi]
            graph_sigs = []
            for r, t in enumerate(tuples):
                base = r * n
                entries = []
                for w in range(n):
                    sub = tuple(cs[r + (w - t[i]) * pw[i]] for i in range(k))
                    entries.append((ex[base + w],) + sub)
                entries.sort()
                graph_sigs.append((cs[r], tuple(entries)))
            sigs.append(graph_sigs)
        ranks = _rank(s for gs in sigs for s in gs)
        colours = [[ranks[s] for s in gs] for gs in sigs]
        rounds += 1
        if len(ranks) == num_classes:
            break
        num_classes = len(ranks)
        if budget is not None and rounds >= budget:
            break
        if rounds > total_tuples + 1:
            raise AssertionError("k-WL failed to stabilise within the n^k bound")
    return colours, rounds, num_classes


def wlk_colour(
    g: Graph,
    k: int,
    d: Optional[float] = None,
    cap: int = DEFAULT_TUPLE_CAP,
) -> Colouring:
    """k-WL colouring of V^k after d iterations (d=None means to stability).

    Iteration zero is the atomic-type partition; each further round appends,
    per tuple, the multiset over w of the extended atomic type together with
    the refreshed colours of all single-position substitutions.
    """
    if g.n < 1:
        raise ValueError("k-WL needs at least one vertex")
    colours, _, num_classes = _joint_wlk([g], k, d, cap)
    tuples = list(product(range(g.n), repeat=k))
    mapping = dict(zip(tuples, colours[0]))
    return Colouring(k, mapping, num_classes)


def wlk_indistinguishable(
    g: Graph,
    h: Graph,
    k: int,
    d: Optional[float] = None,
    cap: int = DEFAULT_TUPLE_CAP,
) -> WlVerdict:
    """Compare the k-WL colour histograms of two graphs after d iterations."""
    colours, rounds, _ = _joint_wlk([g, h], k, d, cap)
    hist_g = Counter(colours[0])
    hist_h = Counter(colours[1])
    if hist_g == hist_h:
        return WlVerdict(True, rounds)
    diff = sorted(c for c in hist_g.keys() | hist_h.keys() if hist_g[c] != hist_h[c])
    c = diff[0]
    return WlVerdict(False, rounds, witness=("colour", c, hist_g[c], hist_h[c]))


# ---------------------------------------------------------------------------
# (1,1)-WL: individualised refinement

def _individualised_family(graphs: Sequence[Graph]) -> tuple[list[VertexColouredGraph], list[tuple[int, int]]]:
    family = []
    owners = []
    for gi, g in enumerate(graphs):
        for v in range(g.n):
            family.append(individualise(g, v))
            owners.append((gi, v))
    return family, owners


def _stable_individualised_colours(graphs: Sequence[Graph]) -> list[list[list[int]]]:
    """Stable 1-WL colours of every vertex-individualised copy, shared id space."""
    family, owners = _individualised_family(graphs)
    colours, _, _ = joint_colour_refinement(family)
    out: list[list[list[int]]] = [[None] * g.n for g in graphs]  # type: ignore[misc]
    for copy_colours, (gi, v) in zip(colours, owners):
        out[gi][v] = copy_colours
    return out


def _copy_signature(copy_colours: list[int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(Counter(copy_colours).items()))


@dataclass(frozen=True)
class Wl11Result:
    verdict: WlVerdict
    bijection: Optional[tuple[int, ...]]


def wl11_indistinguishable(g: Graph, h: Graph) -> Wl11Result:
    """(1,1)-WL comparison: match vertices whose individualised graphs agree.

    Per-vertex 1-WL indistinguishability of individualised copies is an
    equivalence relation, so matching reduces to multiset equality of the
    stable colour-histogram signatures; any signature-respecting bijection
    witnesses indistinguishability.
    """
    if g.n != h.n:
        return Wl11Result(
            WlVerdict(False, 0, witness=("vertex-count", g.n, h.n)), None
        )
    if g.n == 0:
        return Wl11Result(WlVerdict(True, 0), ())
    per_graph = _stable_individualised_colours([g, h])
    sig_g = [_copy_signature(per_graph[0][v]) for v in range(g.n)]
    sig_h = [_copy_signature(per_graph[1][w]) for w in range(h.n)]
    count_g = Counter(sig_g)
    count_h = Counter(sig_h)
    if count_g != count_h:
        bad = sorted(s for s in count_g.keys() | count_h.keys() if count_g[s] != count_h[s])
        witness = ("signature", bad[0], count_g[bad[0]], count_h[bad[0]])
        return Wl11Result(WlVerdict(False, 0, witness=witness), None)
    by_sig: dict[tuple, list[int]] = {}
    for w in sorted(range(h.n), reverse=True):
        by_sig.setdefault(sig_h[w], []).append(w)
    pi = tuple(by_sig[sig_g[v]].pop() for v in range(g.n))
    return Wl11Result(WlVerdict(True, 0), pi)


def wl11_colour_classes(g: Graph) -> Colouring:
    """Partition of ordered pairs (v, w) by the stable colour of w in the
    vertex-individualised copy at v, with ids canonical across all n runs."""
    if g.n == 0:
        return Colouring(2, {}, 0)
    per_graph = _stable_individualised_colours([g])
    pair_colour = {
        (v, w): per_graph[0][v][w] for v in range(g.n) for w in range(g.n)
    }
    ranks = _rank(pair_colour.values())
    return Colouring(2, {p: ranks[c] for p, c in pair_colour.items()}, len(ranks))


def wl11_pair_classes(g: Graph, h: Graph) -> tuple[Colouring, Colouring]:
    """Pair colourings of both graphs in one shared, canonical id space."""
    per_graph = _stable_individualised_colours([g, h])
    pairs_g = {(v, w): per_graph[0][v][w] for v in range(g.n) for w in range(g.n)}
    pairs_h = {(v, w): per_graph[1][v][w] for v in range(h.n) for w in range(h.n)}
    ranks = _rank(list(pairs_g.values()) + list(pairs_h.values()))
    cg = Colouring(2, {p: ranks[c] for p, c in pairs_g.items()}, len(ranks))
    ch = Colouring(2, {p: ranks[c] for p, c in pairs_h.items()}, len(ranks))
    return cg, ch


def adjacency_algebra_dimension(g: Graph, cap: int = DEFAULT_TUPLE_CAP) -> int:
    """Dimension of the adjacency algebra: the number of stable 2-WL colours on V^2."""
    return wlk_colour(g, 2, None, cap).num_classes
