"""Exact sparse affine feasibility over the rationals.

Rows are integer coefficient dicts with an integer right-hand side; the
solver performs incremental fraction-free elimination with gcd-normalised
rows, so feasibility verdicts are exact.  Floats cannot certify
infeasibility, hence no floating-point shortcut exists here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


def _normalise(coeffs: dict[int, int], rhs: int) -> tuple[dict[int, int], int]:
    g = 0
    for v in coeffs.values():
        g = gcd(g, abs(v))
    g = gcd(g, abs(rhs))
    if g > 1:
        coeffs = {k: v // g for k, v in coeffs.items()}
        rhs //= g
    return coeffs, rhs


def solve_affine_int(
    num_vars: int,
    rows: Sequence[tuple[dict[int, int], int]],
) -> Optional[dict[int, Fraction]]:
    """Solve the affine system given by (coeffs, rhs) rows exactly.

    Returns one solution (free variables set to zero) or None when the
    system is inconsistent.  Rows are processed sparsest-first; each row is
    reduced against the pivots found so far via integer cross-multiplication.
    """
    pivot_row_of: dict[int, int] = {}  # var -> index into stored
    stored: list[tuple[int, dict[int, int], int]] = []  # (pivot var, coeffs, rhs)
    seen: set[tuple] = set()

    for coeffs, rhs in sorted(rows, key=lambda r: len(r[0])):
        coeffs = {k: v for k, v in coeffs.items() if v}
        coeffs, rhs = _normalise(coeffs, rhs)
        key = (tuple(sorted(coeffs.items())), rhs)
        if key in seen:
            continue
        seen.add(key)
        row = dict(coeffs)
        row_rhs = rhs
        while True:
            hit = None
            for var in row:
                if var in pivot_row_of:
                    hit = var
                    break
            if hit is None:
                break
            _, pcoeffs, prhs = stored[pivot_row_of[hit]]
            a = pcoeffs[hit]
            b = row[hit]
            # row := a*row - b*pivot eliminates `hit`
            new = {k: a * v for k, v in row.items()}
            for k, v in pcoeffs.items():
                new[k] = new.get(k, 0) - b * v
            row = {k: v for k, v in new.items() if v}
            row_rhs = a * row_rhs - b * prhs
            row, row_rhs = _normalise(row, row_rhs)
        if not row:
            if row_rhs != 0:
                return None
            continue
        pivot = min(row)
        pivot_row_of[pivot] = len(stored)
        stored.append((pivot, row, row_rhs))

    solution: dict[int, Fraction] = {}
    for pivot, coeffs, rhs in reversed(stored):
        acc = Fraction(rhs)
        for var, coeff in coeffs.items():
            if var != pivot:
                acc -= coeff * solution.get(var, Fraction(0))
        solution[pivot] = acc / coeffs[pivot]
    return solution
