import json

import pytest

from pdetlab.complex import validate
from pdetlab.families import (
    FamilySpec,
    diminished_trapezohedron,
    load,
    parse_shorthand,
    polygon,
    pyramid,
    simplex,
    simplex_skeleton,
)
from pdetlab.orientation import Infeasible, pair_middle_boundary, sign_solve
from pdetlab.selfdual import SelfDualStructure, validate_self_dual
from pdetlab.trees import tau_via_pdet_chain

GENERATED = {
    "polygon3": polygon(3), "polygon4": polygon(4), "polygon5": polygon(5), "polygon6": polygon(6),
    "simplex1": simplex(1), "simplex3": simplex(3), "simplex5": simplex(5), "simplex6": simplex(6),
    "pyramid-polygon5": pyramid(polygon(5)), "pyramid-polygon4": pyramid(polygon(4)),
    "pyramid-pyramid-polygon3": pyramid(pyramid(polygon(3))),
    "trapezohedron3": diminished_trapezohedron(3), "trapezohedron4": diminished_trapezohedron(4),
    "trapezohedron6": diminished_trapezohedron(6),
}


@pytest.mark.parametrize("name", list(GENERATED))
def test_generated_structures_validate(name):
    s = GENERATED[name]
    assert validate(s.complex) == []
    assert validate_self_dual(s) == []


@pytest.mark.parametrize("name", list(GENERATED))
def test_f_vectors_palindromic(name):
    s = GENERATED[name]
    f = s.complex.f_vector()
    assert f == f[::-1]


def test_polygon_counts():
    assert polygon(3).complex.f_vector() == (1, 3, 3, 1)
    with pytest.raises(ValueError):
        polygon(2)


def test_simplex_counts():
    assert simplex(3).ball_dim == 2
    assert simplex(5).complex.f_vector() == (1, 5, 10, 10, 5, 1)
    assert simplex(7).complex.boundary_matrix(3).shape == (35, 35)


def test_pyramid_over_pentagon():
    p = pyramid(polygon(5))
    assert p.complex.f_vector() == (1, 6, 10, 6, 1)
    assert p.ball_dim == 3


def test_trapezohedron_hexagon():
    s = diminished_trapezohedron(6)
    # the Schlegel picture of the m = 6 case has 13 vertices
    assert s.complex.f_vector() == (1, 13, 24, 13, 1)
    assert s.antipodal


@pytest.mark.parametrize("m", [5, 6])
def test_trapezohedron_tau_symmetry(m):
    x = diminished_trapezohedron(m).complex
    assert tau_via_pdet_chain(x, 0) == tau_via_pdet_chain(x, 2)


def test_antipodality_of_small_families():
    for n in (5, 7):
        assert not isinstance(sign_solve(pair_middle_boundary(polygon(n))), Infeasible)
    for n in (3, 5):
        assert not isinstance(sign_solve(pair_middle_boundary(simplex(n))), Infeasible)
    assert isinstance(sign_solve(pair_middle_boundary(polygon(6))), Infeasible)


def test_shorthand():
    assert parse_shorthand("polygon5") == FamilySpec("polygon", (5,))
    assert parse_shorthand("simplex6-skel2") == FamilySpec("simplex_skeleton", (6, 2))
    assert parse_shorthand("pyramid-polygon4").base == FamilySpec("polygon", (4,))
    assert parse_shorthand("cube") is None
    assert simplex_skeleton(6, 2).f_vector() == (1, 6, 15, 20)


def test_load_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(polygon(5).to_json())
    got = load(path)
    assert isinstance(got, SelfDualStructure) and got.alpha == polygon(5).alpha
    plain = tmp_path / "c.json"
    plain.write_text(json.dumps(polygon(5).complex.to_dict()))
    assert load(plain).f_vector() == (1, 5, 5, 1)
