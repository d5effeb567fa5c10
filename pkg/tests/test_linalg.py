from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import fraction_rank, leibniz_det, matmul, pdet_by_minors, principal_charpoly, transpose
from pdetlab.linalg import (
    IntMatrix,
    binet_cauchy_pdet,
    charpoly_signed,
    charpoly_unsigned,
    colex_subsets,
    column_bases,
    det,
    minor_det,
    pdet,
    rank,
    row_bases,
    smith_normal_form,
)
from pdetlab.polynomial import UniPoly

M = IntMatrix.from_rows
CYCLE3 = [[-1, 0, 1], [1, -1, 0], [0, 1, -1]]  # signed incidence, rows v, cols e
entry = st.integers(-3, 3)


@st.composite
def matrices(draw, max_size=6, square=False, min_size=1):
    r = draw(st.integers(min_size, max_size))
    c = r if square else draw(st.integers(min_size, max_size))
    return [draw(st.lists(entry, min_size=c, max_size=c)) for _ in range(r)]


@st.composite
def symmetric(draw, skew=False):
    n = draw(st.integers(1, 6))
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = draw(entry)
            if i == j:
                a[i][i] = 0 if skew else v
            else:
                a[i][j], a[j][i] = v, (-v if skew else v)
    return a


# rank

@pytest.mark.parametrize("rows,want", [
    ([[0] * 3] * 3, 0),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
    (CYCLE3, 2),
])
def test_rank_examples(rows, want):
    assert rank(M(rows)) == want


# charpoly

def test_charpoly_unsigned_examples():
    assert charpoly_unsigned(M([[0, 0], [0, 0]])) == UniPoly([0, 0, 1])
    assert charpoly_unsigned(M([[0, 1], [1, 0]])) == UniPoly([-1, 0, 1])
    lap = M(CYCLE3) @ M(CYCLE3).T
    assert charpoly_unsigned(lap) == UniPoly([0, 9, 6, 1])


def test_charpoly_signed_examples():
    assert charpoly_signed(IntMatrix.identity(2)) == UniPoly([1, -2, 1])
    assert charpoly_signed(M([[0, 1], [-1, 0]])) == UniPoly([1, 0, 1])
    # skew-symmetric oriented d_1 of the simplex on 3 vertices
    d = M([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    assert charpoly_signed(d) == UniPoly([0, 3, 0, 1])


# pdet

def test_pdet_examples():
    assert pdet(IntMatrix.identity(3)) == 1
    assert pdet(M([[0, 1], [1, 0]])) == -1
    assert pdet(M(CYCLE3) @ M(CYCLE3).T) == 9


def test_pdet_zero_matrix_is_one():
    assert pdet(IntMatrix.zeros(4, 4)) == 1
    assert pdet(IntMatrix.zeros(0, 0)) == 1


# minors

def test_minor_examples():
    assert minor_det(M([[1, 2], [3, 4]]), [], []) == 1
    assert minor_det(M([[1, 2], [3, 4]]), [0, 1], [0, 1]) == -2
    assert minor_det(M([[1, 0, 2], [0, 1, 3]]), [0, 1], [0, 2]) == 3


def test_minor_rejects_bad_index():
    with pytest.raises(IndexError):
        minor_det(M([[1, 2]]), [1], [0])


# Smith normal form

@pytest.mark.parametrize("rows,want", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 1, 1)),
    ([[2]], (2,)),
    ([[1, 1], [1, -1]], (1, 2)),
])
def test_snf_examples(rows, want):
    assert smith_normal_form(M(rows)).diagonal == want


@given(matrices())
def test_snf_divisibility_and_rank(rows):
    snf = smith_normal_form(M(rows))
    nz = [d for d in snf.diagonal if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert snf.rank == fraction_rank(rows)


@given(matrices(square=True))
def test_snf_product_is_abs_det(rows):
    d = leibniz_det(rows)
    if d:
        assert smith_normal_form(M(rows)).nonzero_product() == abs(d)


# Binet-Cauchy and bases

def test_binet_cauchy_examples():
    assert binet_cauchy_pdet(M([[1, 0], [0, 0]])) == 1
    assert binet_cauchy_pdet(M(CYCLE3)) == 9


def test_bases_examples():
    assert row_bases(IntMatrix.identity(2)) == {(0, 1)}
    assert column_bases(IntMatrix.identity(2)) == {(0, 1)}
    assert row_bases(M([[1, 1]])) == {(0,)}
    assert column_bases(M([[1, 1]])) == {(0,), (1,)}
    pairs = set(combinations(range(3), 2))
    assert row_bases(M(CYCLE3)) == pairs
    assert column_bases(M(CYCLE3)) == pairs


def test_colex_order():
    assert list(colex_subsets(4, 2)) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


# properties against slow oracles

@given(matrices(square=True))
def test_det_matches_leibniz(rows):
    assert det(M(rows)) == leibniz_det(rows)


@given(matrices(square=True))
def test_charpoly_matches_principal_minors(rows):
    assert charpoly_unsigned(M(rows)) == UniPoly(principal_charpoly(rows))


@given(matrices(square=True))
def test_charpoly_signed_is_unsigned_of_negation(rows):
    n = len(rows)
    signed = charpoly_signed(M(rows))
    neg = charpoly_unsigned(-M(rows))
    assert signed == neg
    assert signed.degree == n and signed.coeff(n) == 1


@given(matrices(square=True))
def test_pdet_matches_principal_minor_oracle(rows):
    assert pdet(M(rows)) == pdet_by_minors(rows)


@given(matrices(max_size=5))
def test_binet_cauchy_matches_charpoly_pdet(rows):
    b = M(rows)
    assert binet_cauchy_pdet(b) == pdet(b @ b.T)


@given(matrices(square=True))
def test_pdet_transpose(rows):
    assert pdet(M(rows).T) == pdet(M(rows))


@given(matrices(square=True), st.integers(1, 3))
def test_pdet_power(rows, k):
    assert pdet(M(rows) ** k) == pdet(M(rows)) ** k


@given(st.data())
def test_pdet_ab_ba(data):
    n, m = data.draw(st.integers(1, 6)), data.draw(st.integers(1, 6))
    a = [data.draw(st.lists(entry, min_size=m, max_size=m)) for _ in range(n)]
    b = [data.draw(st.lists(entry, min_size=n, max_size=n)) for _ in range(m)]
    assert pdet(M(a) @ M(b)) == pdet(M(b) @ M(a))


@given(matrices(max_size=3))
def test_pdet_mutually_annihilating(rows):
    # d = [[0, B], [0, 0]] squares to zero, so d d^t and d^t d annihilate each other
    r, c = len(rows), len(rows[0])
    n = r + c
    big = [[0] * n for _ in range(n)]
    for i in range(r):
        for j in range(c):
            big[i][r + j] = rows[i][j]
    d = M(big)
    lap_up, lap_down = d @ d.T, d.T @ d
    assert (lap_up @ lap_down).is_zero() and (lap_down @ lap_up).is_zero()
    assert pdet(lap_up + lap_down) == pdet(lap_up) * pdet(lap_down)


@given(matrices(max_size=5))
def test_basis_equivalence(rows):
    b = M(rows)
    r = rank(b)
    rb, cb = row_bases(b), column_bases(b)
    for i_set in combinations(range(b.rows), r):
        assert (i_set in rb) == (fraction_rank([rows[i] for i in i_set]) == r)
    for j_set in combinations(range(b.cols), r):
        assert (j_set in cb) == (fraction_rank([[row[j] for j in j_set] for row in rows]) == r)
        for i_set in combinations(range(b.rows), r):
            assert (minor_det(b, i_set, j_set) != 0) == (i_set in rb and j_set in cb)


@given(matrices(max_size=5), st.data())
def test_det_switch(rows, data):
    b = M(rows)
    r = rank(b)
    if r == 0:
        return
    subs = st.lists(st.integers(0, b.rows - 1), min_size=r, max_size=r, unique=True)
    csubs = st.lists(st.integers(0, b.cols - 1), min_size=r, max_size=r, unique=True)
    a1, a2 = sorted(data.draw(subs)), sorted(data.draw(subs))
    b1, b2 = sorted(data.draw(csubs)), sorted(data.draw(csubs))
    lhs = minor_det(b, a1, b1) * minor_det(b, a2, b2)
    rhs = minor_det(b, a2, b1) * minor_det(b, a1, b2)
    assert lhs == rhs


def _principal_signs(rows):
    r = fraction_rank(rows)
    vals = [leibniz_det([[rows[i][j] for j in idx] for i in idx]) for idx in combinations(range(len(rows)), r)]
    return {v > 0 for v in vals if v}


@given(symmetric())
def test_same_sign_symmetric(rows):
    assert len(_principal_signs(rows)) <= 1
    d = M(rows)
    assert pdet(d @ d.T) == pdet(d) ** 2


@given(symmetric(skew=True))
def test_same_sign_skew(rows):
    assert len(_principal_signs(rows)) <= 1
    d = M(rows)
    assert pdet(d @ d.T) == pdet(d) ** 2


def test_oracle_helpers_agree():
    a = [[1, 2], [3, 4]]
    assert matmul(a, transpose(a)) == (M(a) @ M(a).T).to_lists()
