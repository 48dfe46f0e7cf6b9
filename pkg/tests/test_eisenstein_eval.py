

from fractions import Fraction

import pytest

from src.dmf.base_arith import PolyA, RatF, get_field
from src.dmf.cinfty_model import TailElement
from src.dmf.errors import LatticeError, SpecError
from src.dmf.eisenstein_eval import (
    EisensteinSpec,
    SlashContext,
    alpha_equivariance_check,
    constant_term_check,
    doubling_check,
    eval_eisenstein,
    eval_exp,
    goss_consistency_check,
    leading_term_check,
    slash_transform_check,
    splitting_check,
    tail_gap,
    u_order_sweep,
    u_product_check,
    weight1_inversion_check,
)
from src.dmf.lattice_geom import LatticeCoset, OmegaPoint, standard_point, to_matrix, u_frame


@pytest.fixture
def F2():
    return get_field(2)


@pytest.fixture
def coset2(F2):
    return LatticeCoset.standard(F2, 2, ["1/t", "0"])


def test_spec_validation(F2):
    L = LatticeCoset.standard(F2, 2)
    with pytest.raises(SpecError):
        EisensteinSpec(0, L, 4)
    with pytest.raises(SpecError):
        EisensteinSpec(1, L, 0)


def test_unknown_method_and_rank_mismatch(F2, coset2):
    spec = EisensteinSpec(1, coset2, 4)
    with pytest.raises(SpecError):
        eval_eisenstein(spec, standard_point(2, 2), method="magic")
    with pytest.raises(LatticeError):
        eval_eisenstein(spec, standard_point(2, 3))


def test_direct_and_ball_agree(coset2):
    omega = standard_point(2, 2)
    spec = EisensteinSpec(1, coset2, 4)
    direct = eval_eisenstein(spec, omega, method="direct")
    ball = eval_eisenstein(spec, omega, method="ball")
    assert direct.method == "direct" and ball.method == "ball"
    assert direct.terms > 0
    ok, _, _ = tail_gap(direct.value, ball.value)
    assert ok


def test_full_lattice_vanishes_unless_weight_divisible_by_q_minus_one():
    F3 = get_field(3)
    value = eval_eisenstein(EisensteinSpec(1, LatticeCoset.standard(F3, 2), 4), standard_point(3, 2)).value
    assert value.is_zero()
    assert value.prec >= 4


def test_weight1_inversion(coset2):
    report = weight1_inversion_check(coset2, standard_point(2, 2), 4)
    assert report.passed, report.details


def test_weight1_inversion_needs_v_outside_lattice(F2):
    with pytest.raises(SpecError):
        weight1_inversion_check(LatticeCoset.standard(F2, 2), standard_point(2, 2), 4)


def test_doubling_is_stable(F2):
    spec = EisensteinSpec(2, LatticeCoset.standard(F2, 2), 4)
    assert doubling_check(spec, standard_point(2, 2)).passed


def test_alpha_equivariance_q3():
    F3 = get_field(3)
    coset = LatticeCoset.standard(F3, 2, ["1/t", "0"])
    report = alpha_equivariance_check(EisensteinSpec(1, coset, 3), 2, standard_point(3, 2))
    assert report.passed, report.details
    with pytest.raises(SpecError):
        alpha_equivariance_check(EisensteinSpec(1, coset, 3), 0, standard_point(3, 2))


def test_slash_context_rejects_singular_gamma(F2):
    with pytest.raises(LatticeError):
        SlashContext(to_matrix(F2, [["1", "1"], ["1", "1"]]), 1)


PREC = 8
SCHEDULE = [2, 4, 6, 8]


@pytest.fixture
def gammas(F2):
    return [
        to_matrix(F2, [["1", "1"], ["0", "1"]]),
        to_matrix(F2, [["1", "0"], ["t", "1"]]),
        to_matrix(F2, [["t", "0"], ["0", "1"]]),
    ]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_slash_transform_on_lattice_and_coset(F2, coset2, gammas, k):
    omega = standard_point(2, 2)
    for target in (LatticeCoset.standard(F2, 2), coset2):
        for gamma in gammas:
            report = slash_transform_check(EisensteinSpec(k, target, PREC), gamma, omega)
            assert report.passed, report.details


@pytest.mark.parametrize("depth, pieces", [(1, 2), (2, 4)])
def test_splitting_over_sublattice_cosets(F2, coset2, depth, pieces):
    t = RatF(PolyA.t(F2))
    one = RatF.from_int(F2, 1)
    sub = LatticeCoset.diagonal(F2, [t] * depth + [one] * (2 - depth))
    for k in (1, 2):
        report = splitting_check(EisensteinSpec(k, coset2, PREC), sub, standard_point(2, 2))
        assert report.passed, report.details
        assert report.details["pieces"] == pieces


def test_goss_consistency(F2, coset2):
    report = goss_consistency_check(LatticeCoset.standard(F2, 2), standard_point(2, 2), coset2.v, 2, 2, PREC)
    assert report.passed, report.details


def test_exponential_vanishes_at_a_period(F2):
    # omega_1 / t is a period of t^-1 A^2
    L = LatticeCoset.standard(F2, 2).scaled(RatF(PolyA(F2, (1,)), PolyA.t(F2)))
    value = eval_exp(L, standard_point(2, 2), TailElement.monomial(2, Fraction(-1, 2)), 4)
    assert value.is_zero()
    assert value.prec >= 4


def test_exponential_near_zero_is_the_identity(F2):
    z = TailElement.monomial(2, Fraction(-3, 2))
    value = eval_exp(LatticeCoset.standard(F2, 2), standard_point(2, 2), z, 6)
    assert value.lead == z.lead
    assert value.lc() == 1


def test_ball_certificate_follows_the_point(coset2):
    spec = EisensteinSpec(1, coset2, 4)
    assert eval_eisenstein(spec, standard_point(2, 2), method="ball").certified
    # leading exponents 1 and 0 share a class mod 1
    point = OmegaPoint([TailElement.t(2) + TailElement.monomial(2, Fraction(1, 2)), TailElement.one(2)])
    assert not point.certified
    value = eval_eisenstein(spec, point, method="ball")
    assert value.method == "ball"
    assert not value.certified


def test_leading_term(coset2):
    report = leading_term_check(coset2, standard_point(2, 2), SCHEDULE, PREC)
    assert report.passed, report.details
    assert len(report.details["rows"]) == len(SCHEDULE)


def test_constant_term(F2):
    inside = LatticeCoset.standard(F2, 2, ["0", "1/t"])
    report = constant_term_check(EisensteinSpec(1, inside, PREC), standard_point(2, 2), SCHEDULE, PREC)
    assert report.passed, report.details
    assert report.details["constant"] is not None


def test_constant_term_needs_v1_in_l1(coset2):
    with pytest.raises(SpecError):
        constant_term_check(EisensteinSpec(1, coset2, PREC), standard_point(2, 2), SCHEDULE, PREC)


def test_u_product(F2, coset2):
    frame = u_frame(coset2)
    report = u_product_check(frame, standard_point(2, 2), frame.j * RatF(PolyA.t(F2)), PREC)
    assert report.passed, report.details
    assert report.details["factors"] == 1


def test_u_order_sweep(F2):
    report = u_order_sweep(LatticeCoset.standard(F2, 2), standard_point(2, 2), SCHEDULE, PREC)
    assert report.passed, report.details
    observed = sorted(row["observed"] for row in report.details.values())
    assert observed == [0, 1, 1]
