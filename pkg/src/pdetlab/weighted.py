"""Weighted Laplacian expansions over multilinear polynomial rings.

Row indices of a matrix carry variables ``x_i`` and column indices ``y_j``.
Nothing here forms square roots of diagonal matrices: every quantity is read
off from minors of the integer matrix itself.
"""

from __future__ import annotations

from typing import Sequence

from .linalg import IntMatrix, colex_subsets, column_bases, minor_det, rank, row_bases
from .polynomial import MultiPoly

__all__ = [
    "default_names",
    "weighted_laplacian_charpoly",
    "weighted_pdet",
    "weighted_pdet_bruteforce",
    "weighted_principal_pdet",
]


def default_names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def _check_vars(b: IntMatrix, xvars: Sequence[str], yvars: Sequence[str]) -> list[str]:
    if len(xvars) != b.rows or len(yvars) != b.cols:
        raise ValueError(f"need {b.rows} row and {b.cols} column variables, got {len(xvars)} and {len(yvars)}")
    table = list(xvars) + list(yvars)
    if len(set(table)) != len(table):
        raise ValueError("row and column variables must be distinct")
    return table


def weighted_laplacian_charpoly(b: IntMatrix, xvars: Sequence[str], yvars: Sequence[str]) -> list[MultiPoly]:
    """Coefficients (index = power of ``t``) of ``det(t*1 + X^1/2 B Y B^t X^1/2)``.

    Direct double iteration over all equal-size row/column subsets; each pair
    contributes ``t^(n-|I|) x^I y^J det(B_IJ)^2``.
    """
    table = _check_vars(b, xvars, yvars)
    n = b.rows
    coeffs = [dict() for _ in range(n + 1)]
    xbits = [1 << i for i in range(b.rows)]
    ybits = [1 << (b.rows + j) for j in range(b.cols)]
    for size in range(min(b.rows, b.cols) + 1):
        bucket = coeffs[n - size]
        for rows in colex_subsets(b.rows, size):
            xm = 0
            for i in rows:
                xm |= xbits[i]
            for cols in colex_subsets(b.cols, size):
                d = minor_det(b, rows, cols)
                if d:
                    m = xm
                    for j in cols:
                        m |= ybits[j]
                    bucket[m] = bucket.get(m, 0) + d * d
    return [MultiPoly(table, c) for c in coeffs]


def weighted_pdet_bruteforce(b: IntMatrix, xvars: Sequence[str], yvars: Sequence[str]) -> MultiPoly:
    """Sum over every rank-sized ``I, J`` of ``x^I y^J det(B_IJ)^2``."""
    table = _check_vars(b, xvars, yvars)
    r = rank(b)
    terms: dict[int, int] = {}
    for rows in colex_subsets(b.rows, r):
        xm = sum(1 << i for i in rows)
        for cols in colex_subsets(b.cols, r):
            d = minor_det(b, rows, cols)
            if d:
                m = xm | sum(1 << (b.rows + j) for j in cols)
                terms[m] = terms.get(m, 0) + d * d
    return MultiPoly(table, terms)


def weighted_pdet(b: IntMatrix, xvars: Sequence[str], yvars: Sequence[str]) -> MultiPoly:
    """``pdet(X^1/2 B Y B^t X^1/2)`` summed over row bases x column bases.

    Restricting to bases loses nothing: a rank-sized minor is nonzero exactly
    when its rows form a row basis and its columns a column basis.
    """
    table = _check_vars(b, xvars, yvars)
    rbs = sorted(row_bases(b), key=lambda s: s[::-1])
    cbs = sorted(column_bases(b), key=lambda s: s[::-1])
    terms: dict[int, int] = {}
    for rows in rbs:
        xm = sum(1 << i for i in rows)
        for cols in cbs:
            d = minor_det(b, rows, cols)
            if d == 0:
                raise ArithmeticError(f"basis minor vanished at rows={rows} cols={cols}")
            m = xm | sum(1 << (b.rows + j) for j in cols)
            terms[m] = terms.get(m, 0) + d * d
    return MultiPoly(table, terms)


def weighted_principal_pdet(m: IntMatrix, names: Sequence[str]) -> MultiPoly:
    """``pdet(X M)`` for ``X = diag(names)``.

    The coefficient of ``t^(n-s)`` in ``det(t*1 + X M)`` is the sum of
    ``x^I det(M_II)`` over ``|I| = s``; distinct ``I`` give distinct monomials,
    so the pseudodeterminant is the sum at the largest ``s`` with a nonzero
    principal minor.
    """
    if not m.is_square:
        raise ValueError("weighted pseudodeterminant needs a square matrix")
    if len(names) != m.rows:
        raise ValueError(f"need {m.rows} variables, got {len(names)}")
    for s in range(rank(m), -1, -1):
        terms: dict[int, int] = {}
        for idx in colex_subsets(m.rows, s):
            d = minor_det(m, idx, idx)
            if d:
                terms[sum(1 << i for i in idx)] = d
        if terms:
            return MultiPoly(names, terms)
    return MultiPoly.constant(1, names)
