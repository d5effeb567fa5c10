"""Exact integer linear algebra.

Everything here works on Python ints and never rounds: fraction-free (Bareiss)
elimination for determinants and rank, Smith normal form by unimodular row and
column operations, characteristic polynomials by exact interpolation, and the
pseudodeterminant as the last nonzero coefficient of ``det(t*1 + M)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Iterator, Sequence

from .polynomial import UniPoly

__all__ = [
    "IntMatrix",
    "SnfResult",
    "rank",
    "det",
    "minor_det",
    "charpoly_unsigned",
    "charpoly_signed",
    "pdet",
    "smith_normal_form",
    "binet_cauchy_pdet",
    "row_bases",
    "column_bases",
    "nullspace",
    "colex_subsets",
]


class IntMatrix:
    """Dense row-major matrix of arbitrary-precision integers.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows, self.cols = rows, cols
        if entries is None:
            flat = [0] * (rows * cols)
        else:
            flat = [int(x) for x in entries]
            if len(flat) != rows * cols:
                raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        self._data = tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entries(self) -> list[int]:
        return [x for r in self._data for x in r]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_lists()!r})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, (self._data[i][j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(self.rows, self.cols, (a + b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(self.rows, self.cols, (a - b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (-a for a in self.entries()))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (c * a for a in self.entries()))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            self.rows,
            other.cols,
            (sum(a * b for a, b in zip(r, c) if a) for r in self._data for c in ocols),
        )

    def __pow__(self, k: int) -> "IntMatrix":
        if not self.is_square or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = IntMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        for i in rows:
            if not 0 <= i < self.rows:
                raise IndexError(f"row index {i} out of range")
        for j in cols:
            if not 0 <= j < self.cols:
                raise IndexError(f"column index {j} out of range")
        return IntMatrix(len(rows), len(cols), (self._data[i][j] for i in rows for j in cols))

    def scale_columns(self, factors: Sequence[int]) -> "IntMatrix":
        if len(factors) != self.cols:
            raise ValueError("one factor per column")
        return IntMatrix(self.rows, self.cols, (a * f for r in self._data for a, f in zip(r, factors)))

    def scale_rows(self, factors: Sequence[int]) -> "IntMatrix":
        if len(factors) != self.rows:
            raise ValueError("one factor per row")
        return IntMatrix(self.rows, self.cols, (a * f for r, f in zip(self._data, factors) for a in r))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def is_skew_symmetric(self) -> bool:
        return self.is_square and self == -self.transpose()

    def trace(self) -> int:
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum(self._data[i][i] for i in range(self.rows))

    def shift(self, t: int) -> "IntMatrix":
        """``t*1 + M``."""
        if not self.is_square:
            raise ValueError("shift of a non-square matrix")
        n = self.rows
        return IntMatrix(n, n, (self._data[i][j] + (t if i == j else 0) for i in range(n) for j in range(n)))

    def _check_same(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


# ---------------------------------------------------------------- elimination


def _bareiss_det(a: list[list[int]]) -> int:
    """Determinant by Bareiss elimination; ``a`` is consumed."""
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = a[k]
        p = rk[k]
        tail = rk[k + 1:]
        for i in range(k + 1, n):
            ri = a[i]
            q = ri[k]
            if q:
                ri[k + 1:] = [(x * p - q * y) // prev for x, y in zip(ri[k + 1:], tail)]
            elif p != prev:
                ri[k + 1:] = [(x * p) // prev for x in ri[k + 1:]]
        prev = p
    return sign * a[n - 1][n - 1]


def _bareiss_rank(a: list[list[int]], ncols: int) -> int:
    """Rank over Q by fraction-free row echelon reduction; ``a`` is consumed."""
    n = len(a)
    r, prev = 0, 1
    for c in range(ncols):
        if r == n:
            break
        piv = None
        for i in range(r, n):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        rr = a[r]
        p = rr[c]
        for i in range(r + 1, n):
            ri = a[i]
            q = ri[c]
            ri[c:] = [(x * p - q * y) // prev for x, y in zip(ri[c:], rr[c:])]
        prev = p
        r += 1
    return r


def det(m: IntMatrix) -> int:
    if not m.is_square:
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    return _bareiss_det(m.to_lists())


def rank(m: IntMatrix) -> int:
    """Rank over the rationals."""
    return _bareiss_rank(m.to_lists(), m.cols)


def minor_det(m: IntMatrix, rows: Sequence[int], cols: Sequence[int]) -> int:
    """Determinant of the submatrix on ``rows`` x ``cols`` (1 for the empty minor)."""
    if len(rows) != len(cols):
        raise ValueError(f"minor needs |I| = |J|, got {len(rows)} and {len(cols)}")
    nr, nc = m.rows, m.cols
    if any(not 0 <= i < nr for i in rows) or any(not 0 <= j < nc for j in cols):
        raise IndexError("minor index out of range")
    data = m._data
    return _bareiss_det([[data[i][j] for j in cols] for i in rows])


# ------------------------------------------------------- characteristic polys


def _interpolate_consecutive(values: Sequence[int]) -> UniPoly:
    """Integer polynomial of degree < len(values) through (0, v0), (1, v1), ...

    Newton forward differences at consecutive integers; for an integer
    polynomial the k-th difference is divisible by k!, so everything stays in Z.
    """
    diffs = []
    row = list(values)
    while row:
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    result = UniPoly()
    falling = UniPoly([1])
    fact = 1
    for k, d in enumerate(diffs):
        if k:
            fact *= k
        q, rem = divmod(d, fact)
        if rem:
            raise ArithmeticError("interpolation data is not an integer polynomial")
        result = result + falling * q
        falling = falling * UniPoly([-k, 1])
    return result


def charpoly_unsigned(m: IntMatrix) -> UniPoly:
    """``det(t*1 + M)`` as an integer polynomial in ``t``.

    Evaluates the determinant at ``t = 0..n`` with Bareiss elimination and
    interpolates exactly.
    """
    if not m.is_square:
        raise ValueError(f"characteristic polynomial of non-square {m.shape} matrix")
    n = m.rows
    base = m.to_lists()
    values = []
    for t in range(n + 1):
        a = [list(r) for r in base]
        for i in range(n):
            a[i][i] += t
        values.append(_bareiss_det(a))
    return _interpolate_consecutive(values)


def charpoly_signed(m: IntMatrix) -> UniPoly:
    """``det(t*1 - M)``."""
    if not m.is_square:
        raise ValueError(f"characteristic polynomial of non-square {m.shape} matrix")
    return charpoly_unsigned(-m)


def pdet(m: IntMatrix) -> int:
    """Pseudodeterminant: the last nonzero coefficient of ``det(t*1 + M)``.

    The zero matrix (of any size, including 0x0) has pdet 1, the empty product.
    """
    if not m.is_square:
        raise ValueError(f"pseudodeterminant of non-square {m.shape} matrix")
    if m.is_zero():
        return 1
    return charpoly_unsigned(m).last_nonzero()


# ------------------------------------------------------------ smith normal form


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors ``d1 | d2 | ... | dr`` followed by zeros."""

    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def nonzero_product(self) -> int:
        out = 1
        for d in self.diagonal:
            if d:
                out *= d
        return out


def smith_normal_form(m: IntMatrix) -> SnfResult:
    a = m.to_lists()
    nr, nc = m.rows, m.cols
    diag: list[int] = []
    t = 0
    while t < min(nr, nc):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            for r in a:
                r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                x = a[i][t]
                if x:
                    q = x // p
                    rt = a[t]
                    a[i] = [u - q * v for u, v in zip(a[i], rt)]
                    if a[i][t]:
                        clean = False
            rt = a[t]
            for j in range(t + 1, nc):
                x = rt[j]
                if x:
                    q = x // p
                    for r in a:
                        r[j] -= q * r[t]
                    if rt[j]:
                        clean = False
            if not clean:
                # a remainder smaller than |p| now sits in row or column t
                best = (abs(p), t, t)
                for i in range(t + 1, nr):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, nc):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                if i != t:
                    a[t], a[i] = a[i], a[t]
                if j != t:
                    for r in a:
                        r[t], r[j] = r[j], r[t]
                continue
            bad = None
            for i in range(t + 1, nr):
                ri = a[i]
                for j in range(t + 1, nc):
                    if ri[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [u + v for u, v in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
        t += 1
    diag.extend([0] * (min(nr, nc) - len(diag)))
    return SnfResult(tuple(diag))


# ----------------------------------------------------------- subset oracles


def colex_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All ``k``-subsets of ``range(n)`` in colexicographic order."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in colex_subsets(top, k - 1):
            yield rest + (top,)


def binet_cauchy_pdet(b: IntMatrix) -> int:
    """``pdet(B B^t)`` by brute force: sum of ``det(B_IJ)^2`` over all rank-sized I, J."""
    r = rank(b)
    total = 0
    for rows in colex_subsets(b.rows, r):
        for cols in colex_subsets(b.cols, r):
            d = minor_det(b, rows, cols)
            total += d * d
    return total


def row_bases(b: IntMatrix) -> set[tuple[int, ...]]:
    r = rank(b)
    return {rows for rows in colex_subsets(b.rows, r) if rank(b.submatrix(rows, range(b.cols))) == r}


def column_bases(b: IntMatrix) -> set[tuple[int, ...]]:
    return row_bases(b.transpose())


def count_subsets(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def nullspace(m: IntMatrix) -> list[tuple[int, ...]]:
    """Primitive integer basis of the right kernel ``{v : M v = 0}``."""
    a = [[Fraction(x) for x in r] for r in m.to_lists()]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                q = a[i][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, c in enumerate(pivots):
            v[c] = -a[row][f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        basis.append(tuple(x // g for x in ints))
    return basis


def all_subsets(n: int) -> Iterator[tuple[int, ...]]:
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)
