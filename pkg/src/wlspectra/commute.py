"""Commute distances of the simple random walk, per connected component.

The primary route evaluates, on each component with its m edges,

    K = (I - D^-1 A + J D / (2m))^-1 (2m D^-1 - J)

and reads off kappa(s, t) = (e_s - e_t)^T K (e_s - e_t).  An independent
hitting-time oracle solves (I - D^-1 A) H = J - 2m D^-1 column by column
under H(t, t) = 0; both routes must agree entrywise within tolerance.
Cross-component pairs have infinite commute distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError
from .graphs import Graph


@dataclass(frozen=True)
class CommuteResult:
    kappa: np.ndarray   # symmetric, zero diagonal, +inf across components
    hitting: np.ndarray  # H(s, s) = 0, +inf across components

    def finite_pair_values(self) -> list[float]:
        n = self.kappa.shape[0]
        return sorted(
            self.kappa[s, t]
            for s in range(n)
            for t in range(s + 1, n)
            if np.isfinite(self.kappa[s, t])
        )

    def infinite_pair_count(self) -> int:
        n = self.kappa.shape[0]
        return sum(
            1
            for s in range(n)
            for t in range(s + 1, n)
            if not np.isfinite(self.kappa[s, t])
        )


def _component_hitting_times(adj: np.ndarray, check_tol: float) -> tuple[np.ndarray, np.ndarray]:
    """(kappa, H) of a connected component with at least one edge."""
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    m = adj.sum() / 2.0
    dinv = np.diag(1.0 / deg)
    walk = dinv @ adj
    ones = np.ones((n, n))
    stat = ones @ np.diag(deg) / (2.0 * m)  # J D / (2m)
    rhs = 2.0 * m * dinv - ones
    try:
        k = np.linalg.solve(np.eye(n) - walk + stat, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError("commute-distance system is singular") from exc
    kappa = np.zeros((n, n))
    for s in range(n):
        for t in range(n):
            kappa[s, t] = k[s, s] + k[t, t] - k[s, t] - k[t, s]

    # hitting-time oracle: column t of (I - walk) H = J - 2m D^-1 with H[t,t]=0
    target = ones - 2.0 * m * dinv
    hitting = np.zeros((n, n))
    base = np.eye(n) - walk
    for t in range(n):
        system = base.copy()
        system[t, :] = 0.0
        system[t, t] = 1.0
        b = target[:, t].copy()
        b[t] = 0.0
        try:
            hitting[:, t] = np.linalg.solve(system, b)
        except np.linalg.LinAlgError as exc:
            raise NumericError("hitting-time system is singular") from exc

    defect = np.max(np.abs(kappa - (hitting + hitting.T)))
    if defect > check_tol:
        raise NumericError(
            f"commute-distance formula and hitting-time oracle disagree by {defect:g}"
        )
    return kappa, hitting


def commute_distances(g: Graph, check_tol: float = 1e-8) -> CommuteResult:
    n = g.n
    kappa = np.full((n, n), np.inf)
    hitting = np.full((n, n), np.inf)
    np.fill_diagonal(kappa, 0.0)
    np.fill_diagonal(hitting, 0.0)
    adj_full = g.adjacency_matrix().astype(float)
    for comp in g.connected_components():
        if len(comp) < 2:
            continue
        idx = np.array(comp)
        local_kappa, local_hitting = _component_hitting_times(
            adj_full[np.ix_(idx, idx)], check_tol
        )
        kappa[np.ix_(idx, idx)] = local_kappa
        hitting[np.ix_(idx, idx)] = local_hitting
    return CommuteResult(kappa, hitting)


def commute_multiset_equal(g: Graph, h: Graph, tol: float = 1e-8) -> bool:
    """Compare the multisets {kappa(s,t) : s < t}; infinities compare exactly."""
    rg = commute_distances(g, tol)
    rh = commute_distances(h, tol)
    if rg.infinite_pair_count() != rh.infinite_pair_count():
        return False
    fg = rg.finite_pair_values()
    fh = rh.finite_pair_values()
    if len(fg) != len(fh):
        return False
    return all(abs(a - b) <= tol * max(1.0, abs(a)) for a, b in zip(fg, fh))


def bfs_distances(g: Graph) -> np.ndarray:
    n = g.n
    dist = np.full((n, n), np.inf)
    for s in range(n):
        dist[s, s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in g.neighbours[v]:
                    if not np.isfinite(dist[s, w]):
                        dist[s, w] = d
                        nxt.append(w)
            frontier = nxt
    return dist


def power_distances(g: Graph) -> np.ndarray:
    """dist(s,t) = min i >= 0 with (A^i)[s,t] != 0, via boolean matrix powers."""
    n = g.n
    dist = np.full((n, n), np.inf)
    adj = g.adjacency_matrix().astype(bool)
    power = np.eye(n, dtype=bool)  # A^0
    for i in range(n):
        for s, t in zip(*np.nonzero(power)):
            if not np.isfinite(dist[s, t]):
                dist[s, t] = i
        power = power @ adj
    return dist
