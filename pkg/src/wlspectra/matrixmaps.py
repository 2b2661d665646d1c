"""Equitable matrix maps: evaluation, spectra, cospectrality, Fürer invariant.

Two numeric layers are used.  Integer-valued maps (adjacency, degree,
Laplacians, complement adjacency, Seidel) and the rational random-walk map
are evaluated exactly and compared through exact characteristic polynomials.
Spectral constructs (projections, heat kernels, the symmetric normalised
Laplacian) live in the float layer with declared tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ContractError, NumericError, SingularMapError
from .graphs import Graph
from .refinement import Colouring, wl11_indistinguishable, wl11_pair_classes, wl1_refine, individualise

DEFAULT_EIG_TOL = 1e-7
DEFAULT_GRID = 1e-6

Exact = Union[int, Fraction]


# ---------------------------------------------------------------------------
# exact dense helpers (nested lists of int/Fraction)

def _eye(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def _mat_add(a, b, ca=1, cb=1):
    return [[ca * x + cb * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_transpose(a):
    return [list(row) for row in zip(*a)]


def _trace(a):
    return sum(a[i][i] for i in range(len(a)))


def charpoly_exact(matrix: Sequence[Sequence[Exact]]) -> tuple[Exact, ...]:
    """Characteristic polynomial coefficients (monic, highest degree first)
    via the Faddeev-LeVerrier recurrence; exact over int or Fraction entries."""
    n = len(matrix)
    a = [list(row) for row in matrix]
    all_int = all(isinstance(x, int) for row in a for x in row)
    coeffs: list[Exact] = [1]
    m = [row[:] for row in a]
    for step in range(1, n + 1):
        t = _trace(m)
        if all_int:
            if t % step:
                raise AssertionError("Faddeev-LeVerrier integer division failed")
            c = -(t // step)
        else:
            c = -Fraction(t, step)
        coeffs.append(c)
        if step == n:
            break
        for i in range(n):
            m[i][i] += c
        m = _mat_mul(a, m)
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# matrix values

@dataclass(frozen=True)
class MatrixValue:
    """Dense square matrix in either the exact-rational or the float layer."""

    entries: np.ndarray  # object array (int/Fraction) when exact, float64 otherwise
    exact: bool

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def rows(self) -> list[list]:
        return self.entries.tolist()

    def to_float(self) -> np.ndarray:
        if self.exact:
            return np.array([[float(x) for x in row] for row in self.rows()], dtype=float)
        return self.entries

    @staticmethod
    def from_rows(rows, exact: bool) -> "MatrixValue":
        if exact:
            arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
            for i, row in enumerate(rows):
                for j, x in enumerate(row):
                    arr[i, j] = x
            return MatrixValue(arr, True)
        return MatrixValue(np.asarray(rows, dtype=float), False)


# ---------------------------------------------------------------------------
# matrix maps

class MatrixMap:
    """A rule assigning an n x n matrix to every n-vertex graph."""

    name: str = "?"
    exact: bool = False

    def evaluate(self, g: Graph) -> MatrixValue:
        raise NotImplementedError

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"MatrixMap({self.name})"


class _NamedMap(MatrixMap):
    def __init__(self, name: str, exact: bool):
        self.name = name
        self.exact = exact

    def __eq__(self, other):
        return isinstance(other, _NamedMap) and self.name == other.name

    def __hash__(self):
        return hash(("named", self.name))

    def evaluate(self, g: Graph) -> MatrixValue:
        n = g.n
        if self.name == "adjacency":
            rows = [[1 if g.has_edge(i, j) else 0 for j in range(n)] for i in range(n)]
        elif self.name == "degree":
            rows = [[g.degree(i) if i == j else 0 for j in range(n)] for i in range(n)]
        elif self.name == "laplacian":
            rows = [
                [g.degree(i) if i == j else (-1 if g.has_edge(i, j) else 0) for j in range(n)]
                for i in range(n)
            ]
        elif self.name == "signless_laplacian":
            rows = [
                [g.degree(i) if i == j else (1 if g.has_edge(i, j) else 0) for j in range(n)]
                for i in range(n)
            ]
        elif self.name == "complement_adjacency":
            rows = [
                [0 if i == j else (0 if g.has_edge(i, j) else 1) for j in range(n)]
                for i in range(n)
            ]
        elif self.name == "seidel":
            rows = [
                [0 if i == j else (-1 if g.has_edge(i, j) else 1) for j in range(n)]
                for i in range(n)
            ]
        elif self.name == "rw_laplacian":
            for v in range(n):
                if g.degree(v) == 0:
                    raise SingularMapError(v)
            rows = [
                [Fraction(1, g.degree(i)) if g.has_edge(i, j) else Fraction(0) for j in range(n)]
                for i in range(n)
            ]
        elif self.name == "sym_laplacian":
            for v in range(n):
                if g.degree(v) == 0:
                    raise SingularMapError(v)
            d = np.array([g.degree(v) for v in range(n)], dtype=float)
            lap = np.diag(d) - g.adjacency_matrix().astype(float)
            scale = 1.0 / np.sqrt(d)
            return MatrixValue(lap * np.outer(scale, scale), False)
        else:
            raise ValueError(f"unknown named map {self.name!r}")
        return MatrixValue.from_rows(rows, exact=True)


adjacency_map = _NamedMap("adjacency", True)
degree_map = _NamedMap("degree", True)
laplacian_map = _NamedMap("laplacian", True)
signless_laplacian_map = _NamedMap("signless_laplacian", True)
complement_adjacency_map = _NamedMap("complement_adjacency", True)
seidel_map = _NamedMap("seidel", True)
rw_laplacian_map = _NamedMap("rw_laplacian", True)
sym_laplacian_map = _NamedMap("sym_laplacian", False)

NAMED_MAPS = {
    m.name: m
    for m in (
        adjacency_map, degree_map, laplacian_map, signless_laplacian_map,
        complement_adjacency_map, seidel_map, rw_laplacian_map, sym_laplacian_map,
    )
}


class HeatKernel(MatrixMap):
    """Time-t heat kernel of the Laplacian: sum over eigenvalues of e^(-lambda t) P_lambda."""

    def __init__(self, t: float):
        self.t = float(t)
        self.name = f"heat_kernel({self.t:g})"
        self.exact = False

    def __eq__(self, other):
        return isinstance(other, HeatKernel) and self.t == other.t

    def __hash__(self):
        return hash(("heat", self.t))

    def evaluate(self, g: Graph) -> MatrixValue:
        lap = laplacian_map.evaluate(g).to_float()
        w, v = np.linalg.eigh(lap)
        out = (v * np.exp(-w * self.t)) @ v.T
        return MatrixValue(out, False)


class Projection(MatrixMap):
    """Projection onto the eigenspace of a base map at a given eigenvalue.

    An eigenvalue matching nothing within tolerance projects onto the empty
    eigenspace, i.e. evaluates to the zero matrix.
    """

    def __init__(self, base: MatrixMap, eigenvalue: float, tol: float = DEFAULT_EIG_TOL):
        self.base = base
        self.eigenvalue = float(eigenvalue)
        self.tol = tol
        self.name = f"projection({base.name},{self.eigenvalue:g})"
        self.exact = False

    def __eq__(self, other):
        return (
            isinstance(other, Projection)
            and self.base == other.base
            and self.eigenvalue == other.eigenvalue
        )

    def __hash__(self):
        return hash(("proj", self.base, self.eigenvalue))

    def evaluate(self, g: Graph) -> MatrixValue:
        m = self.base.evaluate(g).to_float()
        scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        if np.allclose(m, m.T, atol=1e-12 * scale):
            w, v = np.linalg.eigh(m)
            mask = np.abs(w - self.eigenvalue) <= self.tol * max(1.0, abs(self.eigenvalue))
            block = v[:, mask]
            return MatrixValue(block @ block.T, False)
        # general diagonalisable case: spectral projector through eigenvectors
        w, v = np.linalg.eig(m)
        if np.max(np.abs(w.imag)) > 1e-8 * scale:
            raise NumericError(f"complex spectrum for projection base {self.base}")
        w = w.real
        mask = np.abs(w - self.eigenvalue) <= self.tol * max(1.0, abs(self.eigenvalue))
        indicator = np.diag(mask.astype(float))
        try:
            vinv = np.linalg.inv(v)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"base map {self.base} is not diagonalisable") from exc
        return MatrixValue((v @ indicator @ vinv).real, False)


class MapSum(MatrixMap):
    def __init__(self, terms: Sequence[tuple[Exact, MatrixMap]]):
        self.terms = tuple((c, m) for c, m in terms)
        self.exact = all(m.exact and not isinstance(c, float) for c, m in self.terms)
        self.name = " + ".join(f"{c}*{m.name}" for c, m in self.terms)

    def evaluate(self, g: Graph) -> MatrixValue:
        vals = [(c, m.evaluate(g)) for c, m in self.terms]
        if self.exact:
            rows = None
            for c, v in vals:
                rv = v.rows()
                rows = [[c * x for x in row] for row in rv] if rows is None else _mat_add(rows, rv, 1, c)
            return MatrixValue.from_rows(rows, exact=True)
        out = None
        for c, v in vals:
            term = float(c) * v.to_float()
            out = term if out is None else out + term
        return MatrixValue(out, False)


class MapProduct(MatrixMap):
    def __init__(self, factors: Sequence[MatrixMap]):
        self.factors = tuple(factors)
        self.exact = all(m.exact for m in self.factors)
        self.name = " * ".join(m.name for m in self.factors)

    def evaluate(self, g: Graph) -> MatrixValue:
        vals = [m.evaluate(g) for m in self.factors]
        if self.exact:
            rows = vals[0].rows()
            for v in vals[1:]:
                rows = _mat_mul(rows, v.rows())
            return MatrixValue.from_rows(rows, exact=True)
        out = vals[0].to_float()
        for v in vals[1:]:
            out = out @ v.to_float()
        return MatrixValue(out, False)


class MapTranspose(MatrixMap):
    def __init__(self, base: MatrixMap):
        self.base = base
        self.exact = base.exact
        self.name = f"transpose({base.name})"

    def evaluate(self, g: Graph) -> MatrixValue:
        v = self.base.evaluate(g)
        if v.exact:
            return MatrixValue.from_rows(_mat_transpose(v.rows()), exact=True)
        return MatrixValue(v.to_float().T.copy(), False)


def parse_map(text: str) -> MatrixMap:
    """Parse a map identifier such as ``seidel``, ``heat_kernel(0.5)``, or
    ``projection(adjacency,1.0)``."""
    text = text.strip()
    if "(" not in text:
        if text in NAMED_MAPS:
            return NAMED_MAPS[text]
        raise ValueError(f"unknown matrix map {text!r}")
    head, _, rest = text.partition("(")
    args = rest.rstrip(")").split(",")
    if head == "heat_kernel":
        return HeatKernel(float(args[0]))
    if head == "projection":
        return Projection(parse_map(args[0]), float(args[1]))
    raise ValueError(f"unknown matrix map {text!r}")


def evaluate(map_id: MatrixMap, g: Graph) -> MatrixValue:
    return map_id.evaluate(g)


# ---------------------------------------------------------------------------
# spectra

@dataclass(frozen=True)
class SpectrumSummary:
    eigenvalues: tuple[tuple[float, int], ...]  # ascending (value, multiplicity)
    tolerance: float
    charpoly: Optional[tuple] = None  # exact monic coefficients when available

    def __post_init__(self):
        if self.eigenvalues and any(m <= 0 for _, m in self.eigenvalues):
            raise ValueError("multiplicities must be positive")


def _float_eigenvalues(value: MatrixValue) -> np.ndarray:
    m = value.to_float()
    if m.size == 0:
        return np.zeros(0)
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.allclose(m, m.T, atol=1e-12 * scale):
        return np.linalg.eigh(m)[0]
    w = np.linalg.eigvals(m)
    if np.max(np.abs(w.imag)) > 1e-8 * scale:
        raise NumericError("complex eigenvalues outside tolerance")
    return np.sort(w.real)


def _group_eigenvalues(w: np.ndarray, tol: float) -> tuple[tuple[float, int], ...]:
    groups: list[tuple[float, int]] = []
    for x in np.sort(w):
        if groups and abs(x - groups[-1][0]) <= tol * max(1.0, abs(x)):
            v, m = groups[-1]
            groups[-1] = ((v * m + x) / (m + 1), m + 1)
        else:
            groups.append((float(x), 1))
    return tuple(groups)


def spectrum(map_id: MatrixMap, g: Graph, tol: float = DEFAULT_EIG_TOL) -> SpectrumSummary:
    """Eigenvalues grouped within tolerance; exact-layer maps also carry the
    exact characteristic polynomial."""
    value = map_id.evaluate(g)
    w = _float_eigenvalues(value)
    eigs = _group_eigenvalues(w, tol)
    poly = charpoly_exact(value.rows()) if value.exact else None
    return SpectrumSummary(eigs, tol, poly)


def cospectral(map_id: MatrixMap, g: Graph, h: Graph, tol: float = DEFAULT_EIG_TOL) -> bool:
    """Exact characteristic-polynomial comparison for exact-layer maps,
    tolerance-grouped spectrum comparison otherwise."""
    sg = spectrum(map_id, g, tol)
    sh = spectrum(map_id, h, tol)
    if sg.charpoly is not None and sh.charpoly is not None:
        return sg.charpoly == sh.charpoly
    if len(sg.eigenvalues) != len(sh.eigenvalues):
        return False
    for (va, ma), (vb, mb) in zip(sg.eigenvalues, sh.eigenvalues):
        if ma != mb or abs(va - vb) > tol * max(1.0, abs(va)):
            return False
    return True


# ---------------------------------------------------------------------------
# Fürer's spectral invariant

@dataclass(frozen=True)
class FuererInvariant:
    """Adjacency spectrum plus per-vertex multisets of eigenprojection entries,
    canonically rounded for multiset comparison."""

    spectrum: SpectrumSummary
    key: tuple

    def __eq__(self, other):
        return isinstance(other, FuererInvariant) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def fuerer_invariant(
    g: Graph,
    eig_tol: float = DEFAULT_EIG_TOL,
    grid: float = DEFAULT_GRID,
) -> FuererInvariant:
    a = adjacency_map.evaluate(g).to_float()
    if g.n == 0:
        return FuererInvariant(SpectrumSummary((), eig_tol), ((), ()))
    w, v = np.linalg.eigh(a)
    groups = _group_eigenvalues(w, eig_tol)
    projections = []
    lo = 0
    for _, mult in groups:
        block = v[:, lo:lo + mult]
        projections.append(block @ block.T)
        lo += mult

    def snap(x: float) -> int:
        return int(round(x / grid))

    spec_key = tuple((snap(val), mult) for val, mult in groups)
    per_vertex = []
    for u in range(g.n):
        diag = tuple(snap(p[u, u]) for p in projections)
        off = tuple(sorted(tuple(snap(p[u, x]) for p in projections) for x in range(g.n)))
        per_vertex.append((diag, off))
    key = (spec_key, tuple(sorted(per_vertex)))
    poly = charpoly_exact(adjacency_map.evaluate(g).rows())
    return FuererInvariant(SpectrumSummary(groups, eig_tol, poly), key)


# ---------------------------------------------------------------------------
# averaging matrices and Prop.-14-style entry consistency

def averaging_matrix(colours: Sequence[int]) -> list[list[Fraction]]:
    """Projection onto the span of colour-class indicators: block-constant
    1/|class| on each class."""
    n = len(colours)
    sizes = {}
    for c in colours:
        sizes[c] = sizes.get(c, 0) + 1
    return [
        [Fraction(1, sizes[colours[i]]) if colours[i] == colours[j] else Fraction(0) for j in range(n)]
        for i in range(n)
    ]


def stable_individualised_colouring(g: Graph, v: int) -> list[int]:
    colouring, _ = wl1_refine(individualise(g, v))
    return [colouring.of(w) for w in range(g.n)]


def e1_commutation_defect(map_id: MatrixMap, g: Graph, v: int):
    """Max-norm of M^v phi(G) - phi(G) M^v for the averaging matrix of the
    stable individualised colouring at v.  Exact zero check for exact maps."""
    mv = averaging_matrix(stable_individualised_colouring(g, v))
    value = map_id.evaluate(g)
    if value.exact:
        phi = value.rows()
        lhs = _mat_mul(mv, phi)
        rhs = _mat_mul(phi, mv)
        return max(
            (abs(x - y) for row_l, row_r in zip(lhs, rhs) for x, y in zip(row_l, row_r)),
            default=Fraction(0),
        )
    phi = value.to_float()
    mvf = np.array([[float(x) for x in row] for row in mv])
    diff = mvf @ phi - phi @ mvf
    return float(np.max(np.abs(diff))) if diff.size else 0.0


@dataclass(frozen=True)
class ConsistencyReport:
    per_map: tuple[tuple[str, float], ...]  # (map name, max deviation)
    ok: bool


def entry_colour_consistency_check(
    g: Graph,
    h: Graph,
    map_ids: Sequence[MatrixMap],
    tol: float = 1e-8,
) -> ConsistencyReport:
    """Check that matched pair-colour classes carry equal matrix entries.

    Requires the graphs to be (1,1)-WL indistinguishable; entries of each map
    must be constant on every matched class, exactly for exact-layer maps and
    within tolerance for float maps.
    """
    if not wl11_indistinguishable(g, h).verdict.indistinguishable:
        raise ContractError("entry consistency requires (1,1)-WL indistinguishable inputs")
    cg, ch = wl11_pair_classes(g, h)
    per_map = []
    ok = True
    for map_id in map_ids:
        vg = map_id.evaluate(g)
        vh = map_id.evaluate(h)
        exact = vg.exact and vh.exact
        rows_g = vg.rows() if exact else vg.to_float()
        rows_h = vh.rows() if exact else vh.to_float()
        buckets: dict[int, list] = {}
        for (a, b), c in cg.colour.items():
            buckets.setdefault(c, []).append(rows_g[a][b])
        for (a, b), c in ch.colour.items():
            buckets.setdefault(c, []).append(rows_h[a][b])
        dev = 0.0
        for values in buckets.values():
            lo, hi = min(values), max(values)
            dev = max(dev, float(hi - lo))
        per_map.append((map_id.name, dev))
        limit = 0.0 if exact else tol
        if dev > limit:
            ok = False
    return ConsistencyReport(tuple(per_map), ok)
