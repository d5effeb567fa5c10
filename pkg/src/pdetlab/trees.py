"""Cellular spanning trees and torsion tree enumerators.

An i-tree of an (i-1)-acyclic complex is the full (i-1)-skeleton plus a set of
i-cells forming a column basis of the i-th boundary matrix.  Each tree is
weighted by the squared order of its (finite) top-but-one homology group.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, gcd, isqrt
from typing import Iterable, Iterator, Sequence

from .complex import (
    CellComplex,
    Subcomplex,
    ensure_valid,
    reduced_homology,
    relative_homology_order,
    require_acyclic,
    restrict_columns,
)
from .linalg import IntMatrix, minor_det, pdet, rank, smith_normal_form
from .polynomial import MultiPoly, complement_transform
from .report import SKIPPED, Check, Report
from .weighted import weighted_pdet

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "TreeRecord",
    "TreeCheck",
    "TauResult",
    "budget_from_env",
    "cell_variables",
    "is_tree",
    "enumerate_trees",
    "tree_list",
    "tree_subcomplex",
    "facet_torsion",
    "tau",
    "tau_weighted",
    "tau_via_pdet_chain",
    "verify_factorization",
    "pair_torsion_check",
]

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, dim: int, candidates: int, budget: int):
        self.dim, self.candidates, self.budget = dim, candidates, budget
        super().__init__(
            f"enumerating {dim}-trees means scanning up to {candidates} subsets, over the budget of {budget}; "
            "use the pdet chain method instead"
        )


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("PDETLAB_BUDGET")
    return int(raw) if raw else default


@dataclass(frozen=True)
class TreeRecord:
    dim: int
    facets: tuple[int, ...]
    torsion: int
    ids: tuple[str, ...] = field(default=(), compare=False)

    def to_json(self) -> str:
        return json.dumps({"facets": list(self.ids), "torsion": self.torsion})


@dataclass(frozen=True)
class TreeCheck:
    is_tree: bool
    count_matches_rank: bool
    top_homology_vanishes: bool
    lower_homology_finite: bool
    reason: str

    def __bool__(self) -> bool:
        return self.is_tree


@dataclass
class TauResult:
    value: int | MultiPoly
    tree_count: int
    max_torsion: int
    variables: dict[str, str] = field(default_factory=dict)


def cell_variables(x: CellComplex, i: int, prefix: str) -> dict[str, str]:
    """Variable name -> cell id for the i-cells, ``prefix1, prefix2, ...`` in cell order."""
    return {f"{prefix}{k + 1}": c for k, c in enumerate(x.cells(i))}


def _facet_indices(x: CellComplex, i: int, facets: Sequence[str | int]) -> tuple[int, ...]:
    cells = x.cells(i)
    out = []
    for f in facets:
        if isinstance(f, int):
            if not 0 <= f < len(cells):
                raise IndexError(f"{i}-cell index {f} out of range")
            out.append(f)
        else:
            if f not in x or x.dim_of(f) != i:
                raise KeyError(f"{f!r} is not an {i}-cell")
            out.append(x.index_of(f))
    if len(set(out)) != len(out):
        raise ValueError("repeated facet")
    return tuple(sorted(out))


def tree_subcomplex(x: CellComplex, i: int, facets: Sequence[str | int]) -> Subcomplex:
    cells = x.cells(i)
    return restrict_columns(x, i, [cells[k] for k in _facet_indices(x, i, facets)])


def _torsion_order(bd: IntMatrix, cols: Sequence[int]) -> int:
    # T contains every (i-1)-cell, so H_(i-1)(T) has torsion = torsion of coker(d_i on T's columns)
    return smith_normal_form(bd.submatrix(range(bd.rows), cols)).nonzero_product()


def is_tree(x: CellComplex, i: int, facets: Sequence[str | int]) -> TreeCheck:
    """Decide whether the (i-1)-skeleton plus ``facets`` is an i-tree, with the conditions used."""
    ensure_valid(x)
    require_acyclic(x, i - 1)
    idx = _facet_indices(x, i, facets)
    bd = x.boundary_matrix(i)
    r = rank(bd)
    sub_rank = rank(bd.submatrix(range(bd.rows), idx))
    count_ok = len(idx) == r
    top_ok = sub_rank == len(idx)  # no cycles among chosen i-cells
    finite_ok = sub_rank == r  # image has full rank in ker d_(i-1)
    ok = count_ok and top_ok and finite_ok
    if ok:
        reason = "all three conditions hold"
    elif not count_ok:
        reason = f"{len(idx)} facets but rank d_{i} = {r}"
    elif not top_ok:
        reason = f"H_{i}(T) != 0: the chosen {i}-cells carry a cycle"
    else:
        reason = f"H_{i - 1}(T) is infinite"
    return TreeCheck(ok, count_ok, top_ok, finite_ok, reason)


def _reduce(vec: list[int], basis: list[tuple[int, list[int]]]) -> list[int] | None:
    """Reduce against a triangular integer basis; None if ``vec`` lies in its span."""
    v = vec
    for p, b in basis:
        c = v[p]
        if c:
            bp = b[p]
            v = [bp * x - c * y for x, y in zip(v, b)]
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
    if g == 0:
        return None
    if g != 1:
        v = [x // g for x in v]
    return v


def _walk(columns: list[list[int]], r: int, tops: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Column bases in colexicographic order, restricted to the given largest elements."""

    def extend(chosen: list[int], basis: list, below: int, need: int) -> Iterator[tuple[int, ...]]:
        if need == 0:
            yield tuple(reversed(chosen))
            return
        for c in range(need - 1, below):
            v = _reduce(columns[c], basis)
            if v is None:
                continue
            pivot = next(k for k, x in enumerate(v) if x)
            chosen.append(c)
            basis.append((pivot, v))
            yield from extend(chosen, basis, c, need - 1)
            basis.pop()
            chosen.pop()

    if r == 0:
        yield ()
        return
    for top in tops:
        v = _reduce(columns[top], [])
        if v is None:
            continue
        pivot = next(k for k, x in enumerate(v) if x)
        yield from extend([top], [(pivot, v)], top, r - 1)


def _reference_rows(x: CellComplex, i: int) -> tuple[list[int], int]:
    """Rows left out by one (i-1)-tree T', and |H_(i-2)(T')|.

    For any i-tree T with facet set J, |det d_IJ| = |H_(i-1)(T)| * |H_(i-2)(T')|
    where I is the complement of T''s facets, so one SNF here replaces one per tree.
    """
    low = x.boundary_matrix(i - 1)
    cols = [list(low.column(j)) for j in range(low.cols)]
    r = rank(low)
    first = next(_walk(cols, r, range(max(r - 1, 0), low.cols)))
    rows = [k for k in range(low.cols) if k not in set(first)]
    return rows, _torsion_order(low, first)


def _reference(x: CellComplex, i: int) -> tuple[list[int], int]:
    cache = x.__dict__.setdefault("_tree_reference", {})
    if i not in cache:
        cache[i] = _reference_rows(x, i)
    return cache[i]


def facet_torsion(x: CellComplex, i: int, facets: Sequence[int]) -> int:
    """|H_(i-1)| of the (i-1)-skeleton plus the i-cells at ``facets``; 0 when that is not an i-tree.

    Assumes the complex is valid and (i-1)-acyclic.
    """
    bd = x.boundary_matrix(i)
    rows, low = _reference(x, i)
    if len(facets) != len(rows):
        return 0
    q, rem = divmod(abs(minor_det(bd, rows, facets)), low)
    if rem:
        raise ArithmeticError(f"pair minor at {tuple(facets)} is inconsistent with the reference tree")
    return q


def _records(x: CellComplex, i: int, bases: Iterator[tuple[int, ...]]) -> Iterator[TreeRecord]:
    bd = x.boundary_matrix(i)
    ids = x.cells(i)
    rows, low = _reference(x, i)
    for basis in bases:
        q, rem = divmod(abs(minor_det(bd, rows, basis)), low)
        if rem or q == 0:
            raise ArithmeticError(f"pair minor at {basis} is inconsistent with the reference tree")
        yield TreeRecord(i, basis, q, tuple(ids[k] for k in basis))


def _chunk_records(args: tuple) -> list[TreeRecord]:
    x, i, tops = args
    bd = x.boundary_matrix(i)
    cols = [list(bd.column(j)) for j in range(bd.cols)]
    return list(_records(x, i, _walk(cols, rank(bd), tops)))


def enumerate_trees(x: CellComplex, i: int, budget: int | None = None, workers: int = 1) -> Iterator[TreeRecord]:
    """All i-trees, in colexicographic order of their facet index sets.

    Raises ``BudgetExceeded`` up front when the subset space is larger than
    ``budget`` (default: ``PDETLAB_BUDGET`` or 10**7).  With ``workers > 1``
    the space is split by largest facet and searched in worker processes;
    the merged stream is the same as the serial one.
    """
    ensure_valid(x)
    require_acyclic(x, i - 1)
    budget = budget_from_env() if budget is None else budget
    bd = x.boundary_matrix(i)
    r = rank(bd)
    candidates = comb(bd.cols, r)
    if candidates > budget:
        raise BudgetExceeded(i, candidates, budget)
    tops = list(range(max(r - 1, 0), bd.cols))
    if workers <= 1 or len(tops) < 2:
        cols = [list(bd.column(j)) for j in range(bd.cols)]
        return _records(x, i, _walk(cols, r, tops))
    chunks = [tops[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk_records, [(x, i, ch) for ch in chunks if ch]))
    merged = [rec for part in parts for rec in part]
    merged.sort(key=lambda rec: rec.facets[::-1])
    return iter(merged)


def tree_list(x: CellComplex, i: int, budget: int | None = None) -> list[TreeRecord]:
    """``enumerate_trees`` materialized and cached on the complex (budget still enforced)."""
    cache = x.__dict__.setdefault("_tree_lists", {})
    if i in cache:
        candidates, records = cache[i]
        limit = budget_from_env() if budget is None else budget
        if candidates > limit:
            raise BudgetExceeded(i, candidates, limit)
        return records
    records = list(enumerate_trees(x, i, budget))
    bd = x.boundary_matrix(i)
    cache[i] = (comb(bd.cols, rank(bd)), records)
    return records


def tau(x: CellComplex, i: int, budget: int | None = None) -> TauResult:
    """Unweighted enumerator: the sum over i-trees of the squared torsion order."""
    if i < 0:
        return TauResult(1, 1, 1)
    total = count = biggest = 0
    for rec in tree_list(x, i, budget):
        total += rec.torsion**2
        count += 1
        biggest = max(biggest, rec.torsion)
    return TauResult(total, count, biggest)


def tau_weighted(
    x: CellComplex, i: int, prefix: str = "x", budget: int | None = None, records: Iterable[TreeRecord] | None = None
) -> TauResult:
    """Weighted enumerator: each tree contributes (product of its facet variables) * torsion^2.

    Pass ``records`` to reuse an enumeration already in hand.
    """
    table = cell_variables(x, i, prefix)
    names = list(table)
    if i < 0:
        return TauResult(MultiPoly.constant(1, names), 1, 1, table)
    terms: dict[int, int] = {}
    count = biggest = 0
    for rec in tree_list(x, i, budget) if records is None else records:
        m = 0
        for k in rec.facets:
            m |= 1 << k
        terms[m] = terms.get(m, 0) + rec.torsion**2
        count += 1
        biggest = max(biggest, rec.torsion)
    return TauResult(MultiPoly(names, terms), count, biggest, table)


def tau_via_pdet_chain(x: CellComplex, i: int) -> int:
    """tau_i from the recursion tau_-1 = 1, tau_j = pdet(d_j d_j^t) / tau_(j-1); no enumeration."""
    ensure_valid(x)
    require_acyclic(x, i - 1)
    value = 1
    for j in range(0, i + 1):
        bd = x.boundary_matrix(j)
        p = pdet(bd @ bd.T)
        q, rem = divmod(p, value)
        if rem:
            raise ArithmeticError(f"pdet(d_{j} d_{j}^t) = {p} is not divisible by tau_{j - 1} = {value}")
        value = q
    return value


def verify_factorization(x: CellComplex, i: int, with_weights: bool = True, budget: int | None = None) -> Report:
    """Compare pdet(d_i d_i^t) against tau_(i-1) * tau_i, optionally doubly weighted."""
    report = Report(f"matrix-tree factorization, dim {i}")
    bd = x.boundary_matrix(i)
    lhs = pdet(bd @ bd.T)
    low = tau(x, i - 1, budget).value
    high = tau(x, i, budget).value
    report.add(Check(
        f"pdet(d{i} d{i}^t) = tau_{i - 1} * tau_{i}",
        "pdet(d d^t) = tau_(i-1)(S) * tau_i(S)",
        lhs, low * high,
    ))
    report.values.update({f"pdet(d{i} d{i}^t)": lhs, f"tau_{i - 1}": low, f"tau_{i}": high})
    r = rank(bd)
    limit = budget_from_env() if budget is None else budget
    if with_weights and comb(bd.rows, r) * comb(bd.cols, r) > limit:
        report.add(Check(
            f"weighted pdet(d{i}) = x^[n] tau_{i - 1}(1/x) tau_{i}(y)",
            "pdet(L) = x^[n] * tau_(i-1)(S, 1/x) * tau_i(S, y)",
            None, None, SKIPPED, "row-basis by column-basis expansion exceeds the budget",
        ))
    elif with_weights:
        xs = tau_weighted(x, i - 1, "x", budget)
        ys = tau_weighted(x, i, "y", budget)
        lhs_w = weighted_pdet(bd, list(xs.variables), list(ys.variables))
        rhs_w = complement_transform(xs.value, list(xs.variables)) * ys.value
        report.add(Check(
            f"weighted pdet(d{i}) = x^[n] tau_{i - 1}(1/x) tau_{i}(y)",
            "pdet(L) = x^[n] * tau_(i-1)(S, 1/x) * tau_i(S, y)",
            lhs_w.to_text(), rhs_w.to_text(),
        ))
        report.variables.update(xs.variables)
        report.variables.update(ys.variables)
    return report


def pair_torsion_check(x: CellComplex, i: int, samples: int = 50, seed: int = 0, budget: int | None = None) -> Report:
    """Sample (i-tree T, (i-1)-tree T') pairs and compare |det d_IJ|, |H_(i-1)(T,T')| and the torsion product.

    J is the set of T's i-facets and I the (i-1)-cells *not* among T''s facets.
    """
    ensure_valid(x)
    if i < 1:
        raise ValueError("pair torsion check needs i >= 1")
    report = Report(f"pair torsion, dim {i}")
    big = tree_list(x, i, budget)
    small = tree_list(x, i - 1, budget)
    rng = random.Random(seed)
    pairs = [(rng.choice(big), rng.choice(small)) for _ in range(samples)]
    bd = x.boundary_matrix(i)
    n_low = x.f(i - 1)
    failures = 0
    for t, t_low in pairs:
        rows = [k for k in range(n_low) if k not in set(t_low.facets)]
        minor = abs(minor_det(bd, rows, t.facets))
        sub_t = tree_subcomplex(x, i, t.facets)
        sub_low = tree_subcomplex(x, i - 1, t_low.facets)
        rel = relative_homology_order(sub_t, sub_low, i - 1)
        h_t = reduced_homology(sub_t, i - 1).order()
        h_low = reduced_homology(sub_low, i - 2).order()
        prod = None if h_t is None or h_low is None else h_t * h_low
        if not (minor == rel == prod):
            failures += 1
            report.add(Check(
                f"pair {t.ids} / {t_low.ids}", "|det d_IJ| = |H(T,T')| = |H(T)| |H(T')|",
                minor, (rel, prod),
            ))
    report.add(Check(
        f"{samples} sampled pairs agree", "|det d_IJ| = |H_(i-1)(T,T')| = |H_(i-1)(T)| * |H_(i-2)(T')|",
        0, failures,
    ))
    return report


def is_perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
