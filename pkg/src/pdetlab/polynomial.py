"""Exact polynomials over the integers.

``UniPoly`` is a dense univariate polynomial in ``t`` (used for characteristic
polynomials).  ``MultiPoly`` is a sparse *multilinear* polynomial whose
monomials are sets of variables, stored as bitmasks over a variable table.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

__all__ = ["UniPoly", "MultiPoly", "complement_transform", "variable_sort_key"]


class UniPoly:
    """Dense polynomial with integer coefficients; ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "UniPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def linear(cls, root_shift: int) -> "UniPoly":
        """The polynomial ``t + root_shift``."""
        return cls([root_shift, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def last_nonzero(self) -> int:
        """Lowest-degree nonzero coefficient (0 for the zero polynomial)."""
        for c in self.coeffs:
            if c:
                return c
        return 0

    def low_order(self) -> int:
        """Exponent of the lowest nonzero term."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial has no lowest term")

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly | int") -> "UniPoly":
        other = _as_unipoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly | int") -> "UniPoly":
        return self + (-_as_unipoly(other))

    def __mul__(self, other: "UniPoly | int") -> "UniPoly":
        other = _as_unipoly(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result, base = UniPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def to_text(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                mono = ""
            elif i == 1:
                mono = var
            else:
                mono = f"{var}^{i}"
            parts.append(_signed_term(c, mono, first=not parts))
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)!r})"


def _as_unipoly(x: "UniPoly | int") -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    if isinstance(x, int):
        return UniPoly([x])
    raise TypeError(f"cannot combine UniPoly with {type(x).__name__}")


def _signed_term(c: int, mono: str, first: bool) -> str:
    mag = abs(c)
    if mono:
        body = mono if mag == 1 else f"{mag}*{mono}"
    else:
        body = str(mag)
    if first:
        return body if c > 0 else f"-{body}"
    return f" + {body}" if c > 0 else f" - {body}"


_NAME_RE = re.compile(r"^(.*?)(\d*)$")


@lru_cache(maxsize=None)
def variable_sort_key(name: str) -> tuple[str, int, str]:
    """Natural order for variable names, so ``x2`` sorts before ``x10``."""
    m = _NAME_RE.match(name)
    prefix, digits = m.group(1), m.group(2)
    return (prefix, int(digits) if digits else -1, name)


class MultiPoly:
    """Multilinear polynomial with integer coefficients.

    A monomial is a set of variables, encoded as a bitmask over ``variables``.
    Zero coefficients are never stored.  Equality is by the polynomial itself,
    independent of the order (or padding) of the variable table.
    """

    __slots__ = ("variables", "terms", "_pos")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping[int, int] | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self._pos = {v: i for i, v in enumerate(self.variables)}
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        limit = 1 << len(self.variables)
        for m in self.terms:
            if m < 0 or m >= limit:
                raise ValueError(f"monomial mask {m} outside variable table")

    # construction helpers

    @classmethod
    def constant(cls, c: int, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls(variables, {0: c})

    @classmethod
    def from_sets(cls, variables: Sequence[str], items: Iterable[tuple[Iterable[str], int]]) -> "MultiPoly":
        p = cls(variables)
        terms: dict[int, int] = {}
        for names, c in items:
            m = p.mask(names)
            terms[m] = terms.get(m, 0) + c
        return cls(variables, terms)

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for v in names:
            bit = 1 << self._pos[v]
            if m & bit:
                raise ValueError(f"variable {v} repeated in a multilinear monomial")
            m |= bit
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if mask >> i & 1)

    def as_dict(self) -> dict[frozenset[str], int]:
        return {frozenset(self.names_of(m)): c for m, c in self.terms.items()}

    # algebra

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over a table that contains every variable in use."""
        target = MultiPoly(variables)
        return MultiPoly(variables, {target.mask(self.names_of(m)): c for m, c in self.terms.items()})

    def _aligned(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        if self.variables == other.variables:
            return self, other
        merged = list(self.variables) + [v for v in other.variables if v not in self._pos]
        return self.with_variables(merged), other.with_variables(merged)

    def _coerce(self, other: "MultiPoly | int") -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.constant(other, self.variables)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other: "MultiPoly | int") -> "MultiPoly":
        a, b = self._aligned(self._coerce(other))
        terms = dict(a.terms)
        for m, c in b.terms.items():
            terms[m] = terms.get(m, 0) + c
        return MultiPoly(a.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly | int") -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: "MultiPoly | int") -> "MultiPoly":
        if isinstance(other, int):
            return MultiPoly(self.variables, {m: c * other for m, c in self.terms.items()})
        a, b = self._aligned(self._coerce(other))
        terms: dict[int, int] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                if m1 & m2:
                    raise ValueError("product leaves the multilinear range")
                m = m1 | m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultiPoly(a.variables, terms)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(frozenset(self.as_dict().items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def rename(self, mapping: Mapping[str, str]) -> "MultiPoly":
        """Substitute variable names; names absent from ``mapping`` are kept."""
        new_names = [mapping.get(v, v) for v in self.variables]
        table: list[str] = []
        for v in new_names:
            if v not in table:
                table.append(v)
        out = MultiPoly(table)
        terms: dict[int, int] = {}
        for m, c in self.terms.items():
            nm = out.mask(mapping.get(v, v) for v in self.names_of(m))
            terms[nm] = terms.get(nm, 0) + c
        return MultiPoly(table, terms)

    def evaluate(self, values: Mapping[str, int] | int = 1) -> int:
        """Evaluate at an integer point; an ``int`` assigns that value to every variable."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for v in self.names_of(m):
                term *= values if isinstance(values, int) else values[v]
            total += term
        return total

    def degree(self) -> int:
        return max((bin(m).count("1") for m in self.terms), default=-1)

    def used_variables(self) -> tuple[str, ...]:
        used = 0
        for m in self.terms:
            used |= m
        return self.names_of(used)

    def to_text(self) -> str:
        """Canonical rendering: terms by (degree, lexicographic monomial), e.g. ``x1*y1 + 2*x2*y3``."""
        if not self.terms:
            return "0"
        rows = []
        for m, c in self.terms.items():
            names = sorted(self.names_of(m), key=variable_sort_key)
            rows.append(((len(names), [variable_sort_key(n) for n in names]), names, c))
        rows.sort(key=lambda r: r[0])
        parts: list[str] = []
        for _, names, c in rows:
            parts.append(_signed_term(c, "*".join(names), first=not parts))
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r})"


def complement_transform(p: MultiPoly, family: Sequence[str]) -> MultiPoly:
    """Send each monomial ``x^U`` to ``x^(family - U)``.

    Realizes ``x^[n] * p(1/x)`` for ``p`` multilinear in ``family``; variables
    outside the family pass through unchanged.  The map is an involution.
    """
    family = list(family)
    if len(set(family)) != len(family):
        raise ValueError("family has repeated variables")
    table = list(p.variables) + [v for v in family if v not in p._pos]
    q = p.with_variables(table)
    fam_mask = q.mask(family)
    return MultiPoly(table, {m ^ fam_mask: c for m, c in q.terms.items()})
