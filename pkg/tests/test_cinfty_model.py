from fractions import Fraction

import pytest

from src.dmf.base_arith import PolyA, RatF, get_field
from src.dmf.cinfty_model import TailElement, TailRing, sum_tails
from src.dmf.errors import FieldError, PrecisionExhausted


def test_inverse_of_t_plus_one_q2():
    x = TailElement.t(2) + 1
    inv = x.inverse(5)
    # 1/(t+1) = t^-1 + t^-2 + ... in characteristic 2
    assert [inv.coeff(-i) for i in range(1, 5)] == [1, 1, 1, 1]
    assert inv.prec == 5
    assert (x * inv).agrees(1)


def test_inverse_of_monomial_is_exact():
    x = TailElement.monomial(3, Fraction(2, 3), 2)
    inv = x.inverse()
    assert inv.is_exact()
    assert x * inv == TailElement.one(3)


def test_fractional_exponents_and_frobenius_powers():
    half = TailElement.monomial(2, Fraction(1, 2))
    assert half**2 == TailElement.t(2)
    assert half.log_norm() == Fraction(1, 2)
    cube = TailElement.monomial(3, Fraction(1, 3)) ** 3
    assert cube == TailElement.t(3)


def test_from_ratf_needs_precision():
    F = get_field(3)
    x = RatF(PolyA(F, (1,)), PolyA(F, (1, 1)))
    with pytest.raises(PrecisionExhausted):
        TailElement.from_ratf(3, x)
    tail = TailElement.from_ratf(3, x, 6)
    assert tail.prec == 6
    assert (tail * (TailElement.t(3) + 1)).agrees(1)


def test_square_root_by_newton():
    x = (TailElement.t(3) + 1) ** 2
    root = x.nth_root(2, 6)
    assert root.agrees(TailElement.t(3) + 1)
    assert (root * root).agrees(x)


def test_root_extends_the_constant_field():
    # 2 is not a square in F_3
    x = TailElement.from_int(3, 2)
    root = x.nth_root(2)
    assert root.field.order == 9
    assert root * root == x


def test_zero_with_precision_cannot_be_inverted():
    with pytest.raises(PrecisionExhausted):
        TailElement.zero(2, 3).inverse()
    with pytest.raises(PrecisionExhausted):
        TailElement.zero(2, 3).lead


def test_mixing_q_is_an_error():
    with pytest.raises(FieldError):
        TailElement.t(2) + TailElement.t(3)


def test_text_rendering():
    assert TailElement.t(2).truncate(3).to_text() == "t + O(t^{-3})"
    assert TailElement.monomial(2, Fraction(1, 2)).to_text() == "t^{1/2}"
    assert TailElement.zero(2).to_text() == "0"


def test_truncate_and_relative_precision():
    x = TailElement.t(2) ** 3 + TailElement.t(2) + 1
    assert x.truncate(0).coeff(0) == 0
    assert x.with_relative(2).to_text() == "t^{3} + O(t^{1})"


def test_tail_ring_div_poly():
    ring = TailRing(2, 6)
    F = get_field(2)
    t3 = TailElement.t(2) ** 3
    quotient = ring.div_poly(t3, PolyA(F, (1, 1)))
    assert quotient.prec == 6
    assert (quotient * (TailElement.t(2) + 1)).agrees(t3)
    with pytest.raises(FieldError):
        ring.div_poly(t3, PolyA(F))


def test_sum_tails():
    total = sum_tails(2, [TailElement.t(2), TailElement.t(2), TailElement.one(2)])
    assert total == TailElement.one(2)
