"""Middle boundary of an even-dimensional self-dual ball, sign solving, and the Dirac operator."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .complex import CellComplex, ensure_valid
from .linalg import IntMatrix, charpoly_signed, charpoly_unsigned, pdet
from .polynomial import UniPoly, complement_transform
from .report import EXPECTED_NEGATIVE, Check, Report
from .selfdual import SelfDualStructure, ensure_self_dual
from .trees import budget_from_env, cell_variables, tau_via_pdet_chain, tau_weighted
from .weighted import weighted_principal_pdet

__all__ = [
    "PairedMatrix",
    "SignVector",
    "Infeasible",
    "pair_middle_boundary",
    "sign_solve",
    "apply_signs",
    "simplex_symmetric_boundary",
    "dirac_operator",
    "total_boundary",
    "verify_square_root_theorem",
    "simplex_spectrum_check",
]


@dataclass(frozen=True)
class PairedMatrix:
    """Square boundary block; column a is the k-cell ``cols[a]``, row a is its partner ``rows[a]``."""

    matrix: IntMatrix
    k: int
    cols: tuple[str, ...]
    rows: tuple[str, ...]

    @property
    def size(self) -> int:
        return self.matrix.rows


SignVector = dict  # k-cell id -> +1 / -1


@dataclass(frozen=True)
class Infeasible:
    """No column signs give the required (skew-)symmetry; ``cells`` witnesses why."""

    kind: str  # "diagonal", "unpaired", "ratio" or "cycle"
    cells: tuple[str, ...]
    detail: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"infeasible ({self.kind}): {self.detail}"


def pair_middle_boundary(s: SelfDualStructure) -> PairedMatrix:
    """d_k with row a taken to be alpha of the a-th k-cell."""
    d = s.ball_dim
    if d % 2:
        raise ValueError(f"middle boundary pairing needs an even-dimensional ball, got d = {d}")
    ensure_self_dual(s)
    x, k = s.complex, d // 2
    cols = tuple(x.cells(k))
    rows = tuple(s.alpha[c] for c in cols)
    bd = x.boundary_matrix(k)
    order = [x.index_of(r) for r in rows]
    return PairedMatrix(bd.submatrix(order, range(bd.cols)), k, cols, rows)


def apply_signs(b: PairedMatrix, signs: SignVector) -> IntMatrix:
    return b.matrix.scale_columns([signs[c] for c in b.cols])


def sign_solve(b: PairedMatrix) -> SignVector | Infeasible:
    """Column signs making B diag(e) symmetric (k even) or skew-symmetric (k odd).

    Each nonzero off-diagonal pair fixes the product e_a e_b; the constraints are
    propagated breadth-first from a +1 root in each connected component.
    """
    m, k, n = b.matrix, b.k, b.size
    s = -1 if k % 2 else 1
    for a in range(n):
        if m[a, a] and s == -1:
            return Infeasible("diagonal", (b.cols[a],), f"entry ({b.rows[a]}, {b.cols[a]}) = {m[a, a]} must vanish")
    rel: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in range(n):
        for c in range(a + 1, n):
            u, v = m[a, c], m[c, a]
            if not u and not v:
                continue
            if not u or not v:
                return Infeasible(
                    "unpaired", (b.cols[a], b.cols[c]),
                    f"entries ({b.rows[a]}, {b.cols[c]}) = {u} and ({b.rows[c]}, {b.cols[a]}) = {v}",
                )
            if abs(u) != abs(v):
                return Infeasible("ratio", (b.cols[a], b.cols[c]), f"|{u}| != |{v}|")
            # v e_a = s u e_c
            prod = s * (1 if u == v else -1)
            rel[a].append((c, prod))
            rel[c].append((a, prod))
    eps = [0] * n
    parent = [-1] * n
    for root in range(n):
        if eps[root]:
            continue
        eps[root] = 1
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for c, prod in rel[a]:
                want = eps[a] * prod
                if not eps[c]:
                    eps[c] = want
                    parent[c] = a
                    queue.append(c)
                elif eps[c] != want:
                    return Infeasible("cycle", _cycle(parent, a, c, b.cols), "sign constraints around this cycle multiply to -1")
    return {b.cols[a]: eps[a] for a in range(n)}


def _cycle(parent: list[int], a: int, c: int, names: tuple[str, ...]) -> tuple[str, ...]:
    def path(v: int) -> list[int]:
        out = [v]
        while parent[v] != -1:
            v = parent[v]
            out.append(v)
        return out

    pa, pc = path(a), path(c)
    common = set(pa) & set(pc)
    up = [v for v in pa if v not in common]
    down = [v for v in pc if v not in common]
    meet = next(v for v in pa if v in common)
    return tuple(names[v] for v in up + [meet] + down[::-1])


def simplex_symmetric_boundary(k: int) -> PairedMatrix:
    """d_k of the simplex on 1..2k+1 with complementary pairing and column sign (-1)^(sum of vertices)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = 2 * k + 1
    full = set(range(1, n + 1))
    cols = list(combinations(range(1, n + 1), k + 1))
    rows = [tuple(sorted(full - set(c))) for c in cols]
    data = [[0] * len(cols) for _ in rows]
    for b, sigma in enumerate(cols):
        sign = (-1) ** sum(sigma)
        for j, v in enumerate(sigma):
            face = sigma[:j] + sigma[j + 1:]
            a = rows.index(face) if face in rows else -1
            if a >= 0:
                data[a][b] = sign * (-1) ** j
    name = lambda f: "-".join(map(str, f))  # noqa: E731
    return PairedMatrix(IntMatrix.from_rows(data, len(cols)), k, tuple(map(name, cols)), tuple(map(name, rows)))


def total_boundary(x: CellComplex) -> IntMatrix:
    """Boundary on the direct sum of all chain groups, empty cell included."""
    cells = x.all_cells()
    pos = {c: i for i, c in enumerate(cells)}
    data = [[0] * len(cells) for _ in cells]
    for c in cells:
        for f, coeff in x.boundary(c):
            data[pos[f]][pos[c]] += coeff
    return IntMatrix.from_rows(data, len(cells))


def dirac_operator(x: CellComplex) -> IntMatrix:
    d = total_boundary(x)
    return d + d.T


def verify_square_root_theorem(s: SelfDualStructure, signs: SignVector | None = None, budget: int | None = None) -> Report:
    """|pdet| of the signed middle boundary against tau_k and tau_(k-1); weighted halves too."""
    b = pair_middle_boundary(s)
    k = b.k
    report = Report(f"square root, k = {k}")
    if signs is None:
        signs = sign_solve(b)
        if isinstance(signs, Infeasible):
            raise ValueError(str(signs))
    m = apply_signs(b, signs)
    sym = (-1) ** k
    report.add(Check("signed boundary has the required symmetry", "d^t = (-1)^k d", m.T, m.scale(sym)))
    x = s.complex
    p = pdet(m)
    tk, tk1 = tau_via_pdet_chain(x, k), tau_via_pdet_chain(x, k - 1)
    sign = 1 if p > 0 else -1
    report.values.update({"pdet(d)": p, "sign of pdet(d)": sign, f"tau_{k}": tk, f"tau_{k - 1}": tk1})
    if abs(p) == tk == tk1:
        report.values[f"|pdet(d)| = tau_{k} = tau_{k - 1}"] = tk
    report.add(Check(f"|pdet(d)| = tau_{k}", "pdet(d) = tau_k(S)", tk, abs(p)))
    report.add(Check(f"|pdet(d)| = tau_{k - 1}", "pdet(d) = tau_(k-1)(S)", tk1, abs(p)))
    report.add(Check("pdet(d d^t) = pdet(d)^2", "pdet(d d^t) = pdet(d)^2", p * p, pdet(m @ m.T)))

    budget = budget_from_env() if budget is None else budget
    try:
        ys = tau_weighted(x, k, "y", budget)
        xs = tau_weighted(x, k - 1, "x", budget)
    except Exception as exc:  # budget
        report.values["weighted"] = f"skipped: {exc}"
        return report
    # Y d^t: rows of d^t are the k-cells in column order
    ynames = {c: n for n, c in ys.variables.items()}
    lhs_y = weighted_principal_pdet(m.T, [ynames[c] for c in b.cols])
    xnames = {c: n for n, c in xs.variables.items()}
    lhs_x = weighted_principal_pdet(m, [xnames[c] for c in b.rows])
    rhs_x = complement_transform(xs.value, list(xs.variables))
    report.variables.update(ys.variables)
    report.variables.update(xs.variables)
    report.add(Check("pdet(Y d^t) = tau_k(S,y)", "pdet(Y d^t) = tau_k(S,y)",
                     (ys.value * sign).to_text(), lhs_y.to_text()))
    report.add(Check("pdet(X d) = x^[n] tau_(k-1)(S,1/x)", "pdet(X d) = x^[n] tau_(k-1)(S,1/x)",
                     (rhs_x * sign).to_text(), lhs_x.to_text()))
    return report


def simplex_spectrum_check(k: int) -> Report:
    """Closed-form characteristic polynomials of the symmetrized simplex middle boundary."""
    if not 1 <= k <= 4:
        raise ValueError("k must be between 1 and 4")
    b = simplex_symmetric_boundary(k).matrix
    n = 2 * k + 1
    bb, cc = comb(n - 1, k + 1), comb(n - 1, k)
    t = UniPoly.monomial(1)
    report = Report(f"simplex spectrum, k = {k}")
    lap = charpoly_unsigned(b @ b.T)
    want_lap = t**bb * UniPoly.linear(n) ** cc
    quad = UniPoly([n if k % 2 else -n, 0, 1])
    want_d = t**bb * quad ** (cc // 2)
    got_d = charpoly_signed(b)
    report.values.update({"det(t + d d^t)": lap, "det(t - d)": got_d})
    report.add(Check("det(t + d d^t) = t^B (t + n)^C", "det(t + d d^t) = t^B (t + n)^C", want_lap, lap))
    report.add(Check("det(t - d) = t^B (t^2 -+ n)^(C/2)", "det(t - d) = t^B (t^2 + (-1)^(k+1) n)^(C/2)", want_d, got_d))
    signed = charpoly_signed(b @ b.T)
    report.add(Check("det(t - d d^t) differs from t^B (t + n)^C", "signed reading of the Laplacian line",
                     want_lap, signed, status=EXPECTED_NEGATIVE if signed != want_lap else None,
                     note="d d^t is positive semidefinite, so only the unsigned reading can hold"))
    report.add(Check("trace(d) = 0", "zero diagonal", 0, b.trace()))
    report.add(Check("(skew-)symmetry", "d^t = (-1)^k d", b.T, b.scale((-1) ** k)))
    return report
