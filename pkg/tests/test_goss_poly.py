import pytest

from src.dmf import goss_poly
from src.dmf.base_arith import get_field
from src.dmf.errors import SpecError
from src.dmf.mpoly import MPoly


def test_first_goss_polynomials_q2():
    assert goss_poly.goss_text(1, 2) == "X"
    assert goss_poly.goss_text(2, 2) == "X^2"
    assert goss_poly.goss_text(3, 2) == "X^3 + X^2*Y1"


@pytest.mark.parametrize("q, p", [(2, 2), (3, 3), (4, 2), (5, 5)])
def test_goss_is_power_of_x_up_to_q(q, p):
    F = get_field(p)
    for k in range(1, q + 1):
        assert goss_poly.goss(k, q) == MPoly.var(F, 1, 0, k)


@pytest.mark.parametrize("q, p", [(2, 2), (3, 3), (4, 2), (5, 5)])
def test_goss_q_plus_one(q, p):
    F = get_field(p)
    X = MPoly.var(F, 2, 0)
    Y1 = MPoly.var(F, 2, 1)
    assert goss_poly.goss(q + 1, q) == X ** (q + 1) + X**2 * Y1


def test_goss_index_must_be_positive():
    with pytest.raises(ValueError):
        goss_poly.goss(0, 2)


def test_y_count():
    assert goss_poly.y_count(2, 2) == 0
    assert goss_poly.y_count(3, 2) == 1
    assert goss_poly.y_count(5, 2) == 2
    assert goss_poly.y_count(10, 3) == 2


def test_goss_json_shape():
    data = goss_poly.goss_json(3, 2)
    assert data["variables"] == ["X", "Y1"]
    assert data["terms"] == [[[3, 0], 1], [[2, 1], 1]]
    assert data["text"] == "X^3 + X^2*Y1"


def test_ord_x():
    assert goss_poly.ord_x(3, 3) == 3
    # G_{q+1} = X^{q+1} + X^2 Y1
    assert goss_poly.ord_x(4, 3) == 2


def test_subspace_grid_sizes():
    assert sorted(len(H) for H in goss_poly.subspace_grid(2)) == [1, 2, 2, 2, 4]
    assert sorted(len(H) for H in goss_poly.subspace_grid(3)) == [1, 3, 3, 3, 3, 9]


def test_check_fq_stable():
    F4 = get_field(2, 2)
    with pytest.raises(SpecError):
        goss_poly.check_fq_stable([0, 1, F4.gen], 2, F4)
    goss_poly.check_fq_stable(goss_poly.span([1, F4.gen], 2, F4), 2, F4)


def test_exponential_coefficients_of_fq():
    # e_{F_2}(z) = z^2 + z
    F4 = get_field(2, 2)
    coeffs = goss_poly.exponential_coefficients([0, 1], 2, F4)
    assert coeffs == {0: 1, 1: 1}


def test_identity_checks_q2():
    assert goss_poly.frobenius_check(2, 8).passed
    assert goss_poly.derivative_check(2, 20).passed
    assert goss_poly.shape_check(2, 20).passed
    assert goss_poly.partial_fraction_check(2).passed


def test_identity_checks_q3():
    assert goss_poly.frobenius_check(3, 6).passed
    assert goss_poly.derivative_check(3, 20).passed
    assert goss_poly.shape_check(3, 20).passed
    report = goss_poly.partial_fraction_check(3, 6)
    assert report.passed
    assert report.details["kmax"] == 6
