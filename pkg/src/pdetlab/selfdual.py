"""Self-dual balls: an order-reversing bijection on the face poset, blockers, and duality checks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb, isqrt
from typing import Mapping

from .complex import (
    EMPTY,
    CellComplex,
    ComplexFormatError,
    InvalidComplexError,
    Subcomplex,
    Violation,
    dumps_document,
    ensure_valid,
    validate,
)
from .linalg import pdet, rank
from .polynomial import complement_transform
from .report import SKIPPED, Check, Report
from .trees import (
    BudgetExceeded,
    budget_from_env,
    cell_variables,
    tree_list,
    facet_torsion,
    tau_via_pdet_chain,
    tau_weighted,
)
from .weighted import weighted_pdet

__all__ = [
    "SelfDualStructure",
    "validate_self_dual",
    "ensure_self_dual",
    "alexander_dual",
    "alpha_power",
    "verify_tree_duality",
    "perfect_square_check",
    "duality_suite",
]


@dataclass
class SelfDualStructure:
    """A complex with a map ``alpha`` on all of its cells (empty cell included).

    ``ball_dim`` and ``antipodal`` are trusted inputs: ball-ness is not tested.
    """

    complex: CellComplex
    alpha: dict[str, str]
    ball_dim: int
    antipodal: bool | None = None

    def __post_init__(self) -> None:
        self.alpha = dict(self.alpha)
        self._inverse: dict[str, str] | None = None

    @property
    def d(self) -> int:
        return self.ball_dim

    def inverse(self) -> dict[str, str]:
        if self._inverse is None:
            self._inverse = {v: k for k, v in self.alpha.items()}
        return self._inverse

    def to_dict(self) -> dict:
        doc = self.complex.to_dict()
        doc["ball_dim"] = self.ball_dim
        doc["alpha"] = {c: self.alpha[c] for c in self.complex.all_cells() if c in self.alpha}
        if self.antipodal is not None:
            doc["antipodal"] = self.antipodal
        return doc

    def to_json(self) -> str:
        return dumps_document(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "SelfDualStructure":
        x = CellComplex.from_dict(data)
        if "alpha" not in data or "ball_dim" not in data:
            raise ComplexFormatError('self-dual input needs "alpha" and "ball_dim"')
        alpha = data["alpha"]
        if not isinstance(alpha, Mapping):
            raise ComplexFormatError('"alpha" must map cell ids to cell ids')
        d = data["ball_dim"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise ComplexFormatError('"ball_dim" must be an integer')
        anti = data.get("antipodal")
        return cls(x, {str(k): str(v) for k, v in alpha.items()}, d, None if anti is None else bool(anti))

    @classmethod
    def from_json(cls, text: str) -> "SelfDualStructure":
        return cls.from_dict(json.loads(text))


def validate_self_dual(s: SelfDualStructure) -> list[Violation]:
    """Bijectivity, dimension complementarity, order reversal, and alpha^2 an automorphism."""
    x, alpha, d = s.complex, s.alpha, s.ball_dim
    out: list[Violation] = []
    if not x.regular:
        out.append(Violation("not-regular", EMPTY, "self-dual balls must be regular"))
    out.extend(validate(x))
    if out:
        return out
    if x.dim != d:
        out.append(Violation("ball-dim", EMPTY, f"complex has dimension {x.dim}, ball_dim is {d}"))
    if x.f(d) != 1:
        out.append(Violation("ball-dim", EMPTY, f"expected a unique {d}-cell, found {x.f(d)}"))
    cells = x.all_cells()
    for c in cells:
        if c not in alpha:
            out.append(Violation("alpha-undefined", c, "alpha has no value here"))
    for c in alpha:
        if c not in x:
            out.append(Violation("alpha-unknown", c, "alpha is defined on a cell not in the complex"))
    for c, img in alpha.items():
        if img not in x:
            out.append(Violation("alpha-unknown", c, f"image {img!r} is not a cell"))
    if out:
        return out
    seen: dict[str, str] = {}
    for c in cells:
        img = alpha[c]
        if img in seen:
            out.append(Violation("not-bijective", c, f"{c!r} and {seen[img]!r} both map to {img!r}"))
        seen[img] = c
    for c in cells:
        want = d - 1 - x.dim_of(c)
        got = x.dim_of(alpha[c])
        if got != want:
            out.append(Violation("dimension", c, f"alpha({c}) = {alpha[c]} has dimension {got}, expected {want}"))
    if out:
        return out
    below = x.face_closure()
    for tau in cells:
        for sigma in cells:
            inside = sigma in below[tau]
            if inside != (alpha[tau] in below[alpha[sigma]]):
                rel = "is" if inside else "is not"
                out.append(Violation(
                    "order-reversal", sigma,
                    f"{sigma} {rel} a face of {tau}, but alpha({tau}) = {alpha[tau]} "
                    f"{'is not' if inside else 'is'} a face of alpha({sigma}) = {alpha[sigma]}",
                ))
                return out
    sq = {c: alpha[alpha[c]] for c in cells}
    for tau in cells:
        for sigma in below[tau]:
            if sq[sigma] not in below[sq[tau]]:
                out.append(Violation("alpha-squared", sigma, f"alpha^2 breaks {sigma} <= {tau}"))
                return out
    return out


def ensure_self_dual(s: SelfDualStructure) -> None:
    problems = validate_self_dual(s)
    if problems:
        raise InvalidComplexError(problems)


def _blocker(s: SelfDualStructure, cells: frozenset[str]) -> frozenset[str]:
    alpha = s.alpha
    return frozenset(c for c in s.complex.all_cells() if alpha[c] not in cells)


def alexander_dual(s: SelfDualStructure, t: Subcomplex) -> Subcomplex:
    """The blocker of ``t``: every cell whose alpha-image lies outside ``t``."""
    if t.complex is not s.complex:
        raise ValueError("subcomplex belongs to a different complex")
    return Subcomplex(s.complex, _blocker(s, t.cells))


def alpha_power(s: SelfDualStructure, cells, power: int) -> frozenset[str]:
    """Apply alpha ``power`` times (negative powers use the inverse)."""
    step = s.alpha if power >= 0 else s.inverse()
    out = set(cells)
    for _ in range(abs(power)):
        out = {step[c] for c in out}
    return frozenset(out)


def _search_size(x: CellComplex, i: int) -> int:
    bd = x.boundary_matrix(i)
    return comb(bd.cols, rank(bd))


def _tree_torsion(x: CellComplex, cells: frozenset[str], i: int) -> int:
    """Torsion order if ``cells`` form an i-tree, else 0."""
    for c in x.all_cells():
        dc = x.dim_of(c)
        if (dc < i and c not in cells) or (dc > i and c in cells):
            return 0
    return facet_torsion(x, i, [k for k, c in enumerate(x.cells(i)) if c in cells])


def verify_tree_duality(s: SelfDualStructure, i: int, budget: int | None = None) -> Report:
    """Per-tree blocker checks between i-trees and j-trees, i + j = d - 1."""
    x, d = s.complex, s.ball_dim
    j = d - 1 - i
    if i < 0 or j < 0:
        raise ValueError(f"need 0 <= i <= {d - 1}")
    ensure_valid(x)
    budget = budget_from_env() if budget is None else budget
    report = Report(f"tree duality, dims {i} and {j}")
    ti, tj = tau_via_pdet_chain(x, i), tau_via_pdet_chain(x, j)
    report.values.update({f"tau_{i}": ti, f"tau_{j}": tj})
    report.add(Check(f"tau_{i} = tau_{j}", "tau_i(S) = tau_(d-1-i)(S)", ti, tj))

    size_i, size_j = _search_size(x, i), _search_size(x, j)
    if min(size_i, size_j) > budget:
        report.add(Check(
            "per-tree blocker checks", "T is an i-tree iff T^v is a j-tree", None, None, SKIPPED,
            f"both searches exceed the budget ({size_i}, {size_j} > {budget})",
        ))
        return report
    a, b = (i, j) if size_i <= size_j else (j, i)
    count = bad_tree = bad_torsion = bad_double = 0
    total = 0
    found = tree_list(x, a, budget)
    skeleton = frozenset(c for c in x.all_cells() if x.dim_of(c) < a)
    for rec in found:
        t = skeleton | frozenset(rec.ids)
        dual = _blocker(s, t)
        count += 1
        dual_torsion = _tree_torsion(x, dual, b)
        if not dual_torsion:
            bad_tree += 1
            continue
        if dual_torsion != rec.torsion:
            bad_torsion += 1
        total += rec.torsion**2
        if _blocker(s, dual) != alpha_power(s, t, -2):
            bad_double += 1
    report.values[f"{a}-trees checked"] = count
    report.add(Check(f"blocker of every {a}-tree is a {b}-tree", "T i-tree <=> T^v j-tree", 0, bad_tree))
    report.add(Check("torsion orders match across blockers", "|H_(i-1)(T)| = |H_(j-1)(T^v)|", 0, bad_torsion))
    report.add(Check("double blocker is alpha^-2", "(T^v)^v = alpha^-2(T)", 0, bad_double))
    report.add(Check(f"sum over blockers = tau_{b}", "tau_i(S) = tau_j(S)", tj if b == j else ti, total))

    if max(size_i, size_j) > budget:
        report.add(Check(
            "weighted blocker identity", "tau_i(S,x) = x^[n] tau_j(S,1/x)", None, None, SKIPPED,
            "the larger tree search exceeds the budget",
        ))
        return report
    wi = tau_weighted(x, i, "x", budget, found if a == i else None)
    wj = tau_weighted(x, j, "z", budget, found if a == j else None)
    # j-cell c shares its variable with the i-cell alpha(c)
    x_of = {cell: name for name, cell in wi.variables.items()}
    shared = {name: x_of[s.alpha[cell]] for name, cell in wj.variables.items()}
    rhs = complement_transform(wj.value.rename(shared), list(wi.variables))
    report.variables.update(wi.variables)
    report.add(Check(
        f"weighted tau_{i} against complemented tau_{j}", "tau_i(S,x) = x^[n] tau_j(S,1/x)",
        wi.value.to_text(), rhs.to_text(),
    ))
    return report


def perfect_square_check(s: SelfDualStructure, budget: int | None = None) -> Report:
    """Middle Laplacian pdet is tau_k squared, plain and weighted."""
    x, d = s.complex, s.ball_dim
    if d % 2:
        raise ValueError(f"perfect square check needs an even-dimensional ball, got d = {d}")
    k = d // 2
    budget = budget_from_env() if budget is None else budget
    report = Report(f"perfect square, k = {k}")
    bd = x.boundary_matrix(k)
    p = pdet(bd @ bd.T)
    root = isqrt(p) if p >= 0 else -1
    tk, tk1 = tau_via_pdet_chain(x, k), tau_via_pdet_chain(x, k - 1)
    report.values.update({f"pdet(d{k} d{k}^t)": p, f"tau_{k}": tk, f"tau_{k - 1}": tk1})
    report.add(Check("pdet is a perfect square", "pdet(d d^t) = r^2", p, root * root))
    report.add(Check(f"square root = tau_{k}", "pdet(d d^t) = tau_k(S)^2", tk, root))
    report.add(Check(f"pdet = tau_{k - 1} * tau_{k}", "pdet(d d^t) = tau_(k-1)(S) tau_k(S)", p, tk1 * tk))

    rows_size = comb(bd.rows, rank(bd))
    if max(_search_size(x, k), rows_size) > budget:
        report.add(Check(
            "weighted perfect square", "pdet(L) = tau_k(S,x) tau_k(S,y)", None, None, SKIPPED,
            "tree search exceeds the budget",
        ))
        return report
    xs = cell_variables(x, k - 1, "x")
    ys = tau_weighted(x, k, "y", budget)
    lhs = weighted_pdet(bd, list(xs), list(ys.variables))
    x_of = {cell: name for name, cell in xs.items()}
    inv = s.inverse()
    as_x = ys.value.rename({name: x_of[inv[cell]] for name, cell in ys.variables.items()})
    report.variables.update(xs)
    report.variables.update(ys.variables)
    report.add(Check(
        "weighted perfect square", "pdet(L) = tau_k(S,x) tau_k(S,y)",
        lhs.to_text(), (as_x * ys.value).to_text(),
    ))
    return report


def duality_suite(s: SelfDualStructure, budget: int | None = None) -> Report:
    """Every blocker check for 0 <= i <= j, plus the perfect square in even dimension."""
    report = Report("duality")
    problems = validate_self_dual(s)
    report.add(Check("alpha is an order-reversing bijection", "s <= t iff alpha(s) >= alpha(t)",
                     [], [str(p) for p in problems]))
    if problems:
        return report
    d = s.ball_dim
    for i in range(0, d):
        if i > d - 1 - i:
            break
        try:
            report.extend(verify_tree_duality(s, i, budget))
        except BudgetExceeded as exc:
            report.add(Check(f"tree duality, dims {i} and {d - 1 - i}", "T i-tree <=> T^v j-tree",
                             None, None, SKIPPED, str(exc)))
    if d % 2 == 0:
        report.extend(perfect_square_check(s, budget))
    return report
