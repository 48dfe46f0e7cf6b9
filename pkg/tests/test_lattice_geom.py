from fractions import Fraction

import pytest

from src.dmf.base_arith import PolyA, RatF, get_field
from src.dmf.errors import LatticeError, SpecError
from src.dmf.lattice_geom import (
    LatticeCoset,
    coset_reps,
    enumerate_coset,
    load_coset,
    norm_ball,
    projective_reps,
    quotient_reps,
    reduced_basis,
    standard_point,
    to_matrix,
    u_frame,
)


@pytest.fixture
def F2():
    return get_field(2)


def test_singular_basis_rejected(F2):
    with pytest.raises(LatticeError):
        LatticeCoset([["1", "1"], ["1", "1"]], None, F2)
    with pytest.raises(LatticeError):
        LatticeCoset([["1", "0"], ["0", "1"]], ["1"], F2)


def test_coset_equality_is_modulo_the_lattice(F2):
    a = LatticeCoset.standard(F2, 2, ["1/t", "0"])
    b = LatticeCoset.standard(F2, 2, ["t^2+1/t", "t"])
    assert a == b
    assert a != LatticeCoset.standard(F2, 2)
    assert not a.v_in_lattice()


def test_index_in(F2):
    L = LatticeCoset.standard(F2, 2)
    sub = LatticeCoset(to_matrix(F2, [["t^2", "0"], ["1", "t"]]), None, F2)
    assert sub.index_in(L) == 3
    with pytest.raises(LatticeError):
        L.index_in(sub)


def test_hermite_basis_spans_the_same_lattice(F2):
    L = LatticeCoset(to_matrix(F2, [["t", "1"], ["t^2", "t+1"]]), None, F2)
    H = LatticeCoset(L.hnf_basis(), None, F2)
    assert H.same_lattice(L)


def test_transform_by_identity(F2):
    coset = LatticeCoset.standard(F2, 2, ["1/t", "0"])
    assert coset.transform(to_matrix(F2, [["1", "0"], ["0", "1"]])) == coset


def test_enumerate_coset_small_box(F2):
    points = list(enumerate_coset(LatticeCoset.standard(F2, 2), 0))
    assert len(points) == 3
    shifted = list(enumerate_coset(LatticeCoset.standard(F2, 2, ["1/t", "0"]), 0))
    assert len(shifted) == 4


def test_torsion_representatives():
    F2, F3 = get_field(2), get_field(3)
    t2 = PolyA.t(F2)
    assert len(coset_reps(t2, LatticeCoset.standard(F2, 2))) == 3
    assert len(projective_reps(PolyA.t(F3), LatticeCoset.standard(F3, 2))) == 4
    assert len(coset_reps(t2 * t2, LatticeCoset.standard(F2, 2))) == 15
    with pytest.raises(LatticeError):
        coset_reps(PolyA(F2, (1,)), LatticeCoset.standard(F2, 2))


def test_quotient_reps(F2):
    L = LatticeCoset.standard(F2, 2)
    sub = LatticeCoset.diagonal(F2, [RatF.t(F2), RatF.t(F2)])
    reps = quotient_reps(L, sub)
    assert len(reps) == 4
    assert not any(reps[0])


def test_standard_point_is_certified():
    omega = standard_point(2, 3)
    assert omega.shifts() == (Fraction(2, 3), Fraction(1, 3), Fraction(0))
    assert omega.certified
    assert standard_point(2, 3, "perturbed").certified
    with pytest.raises(LatticeError):
        standard_point(2, 3, "wobbly")


def test_reduced_basis_and_norm_ball(F2):
    L = LatticeCoset(to_matrix(F2, [["1", "1"], ["0", "1"]]), None, F2)
    reduced = reduced_basis(L, standard_point(2, 2))
    assert reduced.rdeg == (Fraction(0), Fraction(1, 2))
    ball = norm_ball(reduced, Fraction(1))
    # 1, t^{1/2}, t
    assert ball.log_norms == (Fraction(0), Fraction(1, 2), Fraction(1))
    assert ball.log_radius == Fraction(3, 2)


def test_u_frame_outside_and_inside(F2):
    outside = u_frame(LatticeCoset.standard(F2, 2, ["1/t", "0"]))
    assert not outside.v1_in_l1
    assert outside.x1 == RatF.from_text(F2, "1/t")
    assert outside.j == RatF.from_text(F2, "1/t")
    inside = u_frame(LatticeCoset.standard(F2, 2, ["0", "1/t"]))
    assert inside.v1_in_l1
    assert inside.x_prime == (RatF.from_text(F2, "1/t"),)


def test_load_coset_reports_locations(tmp_path, F2):
    good = tmp_path / "coset.json"
    good.write_text('{"basis": [["1", "0"], ["0", "1"]], "v": ["1/t", "0"]}')
    assert load_coset(F2, str(good)).v[0] == RatF.from_text(F2, "1/t")

    broken = tmp_path / "broken.json"
    broken.write_text('{"basis": [["1", "0"],\n ["0" "1"]]}')
    with pytest.raises(SpecError) as exc:
        load_coset(F2, str(broken))
    assert f"{broken}:2:" in str(exc.value)

    bad_entry = tmp_path / "entry.json"
    bad_entry.write_text('{"basis": [["1", "0"], ["0", "x"]]}')
    with pytest.raises(SpecError) as exc:
        load_coset(F2, str(bad_entry))
    assert "basis[1][1]" in str(exc.value)
