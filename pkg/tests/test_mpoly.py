import pytest

from src.dmf.base_arith import CoeffField, get_field
from src.dmf.mpoly import MPoly, PolyRing


@pytest.fixture
def ring():
    return PolyRing(get_field(3), 2)


def test_arithmetic_and_cancellation(ring):
    x, y = ring.gens()
    assert (x + y) ** 3 == x**3 + y**3
    assert (x - x).is_zero()
    assert ring.mul(x, ring.from_int(3)).is_zero()


def test_degrees_and_coefficients(ring):
    x, y = ring.gens()
    f = x**2 * y + x * y**3 + ring.from_int(2)
    assert f.degree_in(0) == 2
    assert f.ord_in(1) == 0
    assert f.total_degree() == 4
    assert f.coefficient_in(0, 1) == y**3
    assert f.variables_used() == [0, 1]


def test_derivative_in_characteristic_three(ring):
    x, y = ring.gens()
    assert (x**3 + x * y).derivative(0) == y
    assert (x**3).derivative(0).is_zero()


def test_evaluate_over_coefficient_field(ring):
    x, y = ring.gens()
    f = x**2 + y
    C = CoeffField(3)
    value = f.evaluate([C.t(), C.one], C, coerce=C.from_ff)
    assert value == C.t() ** 2 + 1


def test_format(ring):
    x, y = ring.gens()
    f = x**2 * y + ring.from_int(2)
    assert f.format(["X", "Y"]) == "X^2*Y + 2"
    assert MPoly.zero(ring.domain, 2).format() == "0"
