"""Acceptance criteria 1-9, each checked at exact equality.

Every test prints (and the session summary repeats) one line per criterion:
``criterion N: PASS|FAIL  <summary>``.
"""

import random
import time
from itertools import combinations

import pytest

from pdetlab.complex import is_acyclic_through
from pdetlab.families import diminished_trapezohedron, polygon, pyramid, simplex, simplex_skeleton, single_vertex
from pdetlab.linalg import IntMatrix, binet_cauchy_pdet, column_bases, minor_det, pdet, rank, row_bases
from pdetlab.orientation import (
    Infeasible,
    apply_signs,
    dirac_operator,
    pair_middle_boundary,
    sign_solve,
    simplex_spectrum_check,
    total_boundary,
    verify_square_root_theorem,
)
from pdetlab.polynomial import MultiPoly
from pdetlab.report import FAIL, PASS, SKIPPED
from pdetlab.selfdual import duality_suite
from pdetlab.trees import enumerate_trees, pair_torsion_check, tau, tau_via_pdet_chain, verify_factorization
from pdetlab.weighted import weighted_pdet


class Verdict:
    """Collects named sub-results for one criterion and emits its summary line."""

    def __init__(self, n, config):
        self.n, self.config, self.results = n, config, []

    def __call__(self, name, ok, detail=""):
        self.results.append((name, bool(ok), detail))

    def done(self):
        bad = [r for r in self.results if not r[1]]
        head = f"criterion {self.n}: {'FAIL' if bad or not self.results else 'PASS'}"
        tail = f"{len(self.results) - len(bad)}/{len(self.results)} checks"
        if bad:
            tail += "; failing: " + "; ".join(f"{name} ({detail})" if detail else name for name, _, detail in bad[:3])
            if len(bad) > 3:
                tail += f"; and {len(bad) - 3} more"
        line = f"{head}  {tail}"
        print(line)
        self.config.acceptance_lines[self.n] = line
        assert self.results and not bad, line


@pytest.fixture
def verdict(request):
    return Verdict(request.node.get_closest_marker("criterion").args[0], request.config)


# 1

@pytest.mark.criterion(1)
def test_criterion_1_kalai_counts(verdict):
    for n, k, want in ((3, 1, 3), (5, 2, 125)):
        x = simplex(n).complex
        verdict(f"simplex{n} tau_{k} by enumeration", tau(x, k).value == want)
        verdict(f"simplex{n} tau_{k} by chain", tau_via_pdet_chain(x, k) == want)
    start = time.perf_counter()
    got = tau_via_pdet_chain(simplex(7).complex, 3)
    elapsed = time.perf_counter() - start
    verdict("simplex7 tau_3 by chain = 7^10", got == 282475249 == 7**10, f"got {got}")
    verdict("simplex7 chain under 10 s", elapsed < 10, f"{elapsed:.2f} s")
    verdict.done()


# 2

@pytest.mark.criterion(2)
def test_criterion_2_polygon_identities(verdict):
    for n in range(3, 11):
        x = polygon(n).complex
        bd = x.boundary_matrix(1)
        verdict(f"n={n} pdet = n^2", pdet(bd @ bd.T) == n * n)
        verdict(f"n={n} tau_0 = tau_1 = n", tau(x, 0).value == tau(x, 1).value == n)
        xs = [f"x{i + 1}" for i in range(n)]
        ys = [f"y{i + 1}" for i in range(n)]
        got = weighted_pdet(bd, xs, ys)
        sum_x = MultiPoly.from_sets(xs, [([v], 1) for v in xs])
        hat_y = MultiPoly.from_sets(ys, [([v for v in ys if v != skip], 1) for skip in ys])
        want = sum_x * hat_y
        verdict(f"n={n} weighted pdet = (sum x_i)(sum y_1..^y_i..y_n)", got == want,
                f"x-degree is {got.degree() - (n - 1)}, formula has x-degree 1")
    verdict.done()


# 3

@pytest.mark.criterion(3)
def test_criterion_3_antipodal_square_root(verdict):
    cases = [(polygon(n), n, f"polygon{n}") for n in (3, 5, 7, 9)] + [(simplex(3), 3, "simplex3"), (simplex(5), 125, "simplex5")]
    for s, want, name in cases:
        b = pair_middle_boundary(s)
        signs = sign_solve(b)
        verdict(f"{name} sign_solve succeeds", not isinstance(signs, Infeasible), str(signs))
        if isinstance(signs, Infeasible):
            continue
        p = pdet(apply_signs(b, signs))
        verdict(f"{name} |pdet| = {want}", abs(p) == want, f"pdet = {p}")
    for n in (4, 6):
        verdict(f"polygon{n} sign_solve infeasible", isinstance(sign_solve(pair_middle_boundary(polygon(n))), Infeasible))
    for s, name in ((polygon(5), "polygon5"), (simplex(5), "simplex5")):
        rep = verify_square_root_theorem(s)
        status = {c.name: c.status for c in rep.checks}
        for key in ("pdet(Y d^t) = tau_k(S,y)", "pdet(X d) = x^[n] tau_(k-1)(S,1/x)"):
            verdict(f"{name} {key}", status.get(key) == PASS, status.get(key, "missing"))
    verdict.done()


# 4

@pytest.mark.criterion(4)
def test_criterion_4_simplex_spectrum(verdict):
    for k in (1, 2, 3):
        start = time.perf_counter()
        rep = simplex_spectrum_check(k)
        elapsed = time.perf_counter() - start
        for c in rep.checks:
            if c.name.startswith("det(t + d d^t)") or c.name.startswith("det(t - d) "):
                verdict(f"k={k} {c.name}", c.status == PASS)
        verdict(f"k={k} under 30 s", elapsed < 30, f"{elapsed:.2f} s")
    verdict.done()


# 5

def _rand_matrix(rng, r, c, lo=-3, hi=3):
    return IntMatrix.from_rows([[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)], c)


def _rand_symmetric(rng, n, skew):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = rng.randint(-3, 3)
            if i == j:
                a[i][i] = 0 if skew else v
            else:
                a[i][j], a[j][i] = v, -v if skew else v
    return IntMatrix.from_rows(a, n)


@pytest.mark.criterion(5)
def test_criterion_5_linalg_properties(verdict):
    rng = random.Random(20240601)
    trials = 200
    fails = {key: 0 for key in ("a", "b", "c", "d", "switch", "sym", "skew", "basis", "binet")}
    for _ in range(trials):
        n = rng.randint(1, 6)
        m = _rand_matrix(rng, n, n)
        fails["a"] += pdet(m.T) != pdet(m)
        k = rng.randint(1, 3)
        fails["b"] += pdet(m**k) != pdet(m) ** k
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        a, b = _rand_matrix(rng, r, c), _rand_matrix(rng, c, r)
        fails["c"] += pdet(a @ b) != pdet(b @ a)
        # d = [[0, B], [0, 0]] squares to zero
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        blk = _rand_matrix(rng, r, c)
        big = [[0] * (r + c) for _ in range(r + c)]
        for i in range(r):
            for j in range(c):
                big[i][r + j] = blk[i, j]
        d = IntMatrix.from_rows(big, r + c)
        up, down = d @ d.T, d.T @ d
        fails["d"] += not ((up @ down).is_zero() and pdet(up + down) == pdet(up) * pdet(down))
        # det switch on a random rank-r matrix
        g = _rand_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        rk = rank(g)
        if rk:
            a1, a2 = (sorted(rng.sample(range(g.rows), rk)) for _ in range(2))
            b1, b2 = (sorted(rng.sample(range(g.cols), rk)) for _ in range(2))
            fails["switch"] += minor_det(g, a1, b1) * minor_det(g, a2, b2) != minor_det(g, a2, b1) * minor_det(g, a1, b2)
        for skew in (False, True):
            s = _rand_symmetric(rng, rng.randint(1, 6), skew)
            rs = rank(s)
            signs = {v > 0 for v in (minor_det(s, idx, idx) for idx in combinations(range(s.rows), rs)) if v}
            ok = len(signs) <= 1 and pdet(s @ s.T) == pdet(s) ** 2
            fails["skew" if skew else "sym"] += not ok
        # basis equivalence
        rb, cb = row_bases(g), column_bases(g)
        for i_set in combinations(range(g.rows), rk):
            for j_set in combinations(range(g.cols), rk):
                if (minor_det(g, i_set, j_set) != 0) != (i_set in rb and j_set in cb):
                    fails["basis"] += 1
        fails["binet"] += binet_cauchy_pdet(g) != pdet(g @ g.T)
    labels = {
        "a": "pdet(M^t) = pdet(M)", "b": "pdet(M^k) = pdet(M)^k", "c": "pdet(AB) = pdet(BA)",
        "d": "mutually annihilating pdet(L+M) = pdet(L)pdet(M)", "switch": "det switch",
        "sym": "same sign and pdet(dd^t) = pdet(d)^2, symmetric", "skew": "same sign and pdet(dd^t) = pdet(d)^2, skew",
        "basis": "minor != 0 iff row basis and column basis", "binet": "Binet-Cauchy = charpoly pdet",
    }
    for key, label in labels.items():
        verdict(f"{label} over {trials} instances", fails[key] == 0, f"{fails[key]} failures")
    verdict.done()


# 6

def _feasible_dims(x):
    return [i for i in range(x.dim + 1) if is_acyclic_through(x, i - 1)]


@pytest.mark.criterion(6)
def test_criterion_6_matrix_tree_factorization(verdict):
    cases = [(f"polygon{n}", polygon(n).complex) for n in range(3, 8)]
    cases += [(f"simplex{n}", simplex(n).complex) for n in (4, 5)]
    cases += [("pyramid-polygon5", pyramid(polygon(5)).complex)]
    for name, x in cases:
        for i in _feasible_dims(x):
            rep = verify_factorization(x, i, with_weights=True)
            statuses = [c.status for c in rep.checks]
            verdict(f"{name} dim {i} factorization", statuses and all(s == PASS for s in statuses), str(statuses))
            if i >= 1:
                verdict(f"{name} dim {i} pair torsion", pair_torsion_check(x, i, samples=50, seed=i).ok)
    verdict.done()


# 7

def _self_dual_structures():
    out = [(f"polygon{n}", polygon(n)) for n in range(3, 9)]
    out += [(f"simplex{n}", simplex(n)) for n in range(2, 8)]
    out += [(f"pyramid-polygon{n}", pyramid(polygon(n))) for n in (3, 4, 5)]
    out += [("pyramid-pyramid-polygon3", pyramid(pyramid(polygon(3))))]
    out += [(f"trapezohedron{m}", diminished_trapezohedron(m)) for m in (3, 4, 5, 6)]
    return out


@pytest.mark.criterion(7)
def test_criterion_7_duality(verdict):
    for name, s in _self_dual_structures():
        rep = duality_suite(s)
        fails = [c.name for c in rep.checks if c.status == FAIL]
        ran = [c for c in rep.checks if c.status == PASS]
        verdict(f"{name} duality", not fails and ran, "; ".join(fails))
        if s.ball_dim % 2 == 0:
            root = [c for c in rep.checks if c.name.startswith("square root")]
            verdict(f"{name} perfect square root", root and all(c.status == PASS for c in root))
        skipped = [c.name for c in rep.checks if c.status == SKIPPED]
        # only enumeration over budget may be skipped, never a whole suite
        verdict(f"{name} only budget skips", all("blocker" in n or "weighted" in n for n in skipped), str(skipped))
    verdict.done()


# 8

@pytest.mark.criterion(8)
def test_criterion_8_torsion_sensitivity(verdict):
    x = simplex_skeleton(6, 2)
    recs = list(enumerate_trees(x, 2))
    worst = max(r.torsion for r in recs)
    verdict("some 2-tree has torsion order 2", any(r.torsion == 2 for r in recs), f"max torsion {worst}")
    total = sum(r.torsion**2 for r in recs)
    chain = tau_via_pdet_chain(x, 2)
    verdict("sum of |H_1|^2 = chain", total == chain, f"{total} vs {chain}, {len(recs)} trees")
    verdict.done()


# 9

def _generated_complexes():
    out = [(name, s.complex) for name, s in _self_dual_structures()]
    out += [("simplex6-skel2", simplex_skeleton(6, 2)), ("vertex", single_vertex())]
    return out


@pytest.mark.criterion(9)
def test_criterion_9_dirac(verdict):
    for name, x in _generated_complexes():
        d = total_boundary(x)
        verdict(f"{name} pdet(d + d^t)^2 = pdet(d d^t)^2", pdet(d + d.T) ** 2 == pdet(d @ d.T) ** 2)
    got = pdet(dirac_operator(single_vertex()))
    verdict("single vertex pdet(d + d^t) = -1", got == -1, f"got {got}")
    verdict.done()

