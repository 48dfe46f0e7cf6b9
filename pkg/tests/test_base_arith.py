import pytest

from src.dmf.base_arith import (
    CoeffField,
    PolyA,
    RatF,
    embed,
    galois_field,
    get_field,
    inverse_mod,
    monic_irreducibles,
    poly_gcd,
    prime_power,
    ratf_gcd,
)
from src.dmf.errors import FieldError, ModeError


@pytest.fixture
def F2():
    return get_field(2)


@pytest.fixture
def F3():
    return get_field(3)


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(FieldError):
        prime_power(6)


@pytest.mark.parametrize("p, n", [(2, 1), (2, 2), (3, 2), (5, 1)])
def test_field_inverses_and_frobenius(p, n):
    F = get_field(p, n)
    for a in F.units():
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.order - 1) == 1
    for a in F.elements():
        for b in F.elements():
            assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))


def test_field_division_by_zero():
    F = get_field(3)
    with pytest.raises(FieldError):
        F.inv(0)


def test_embedding_is_a_ring_map():
    small, big = get_field(2, 2), get_field(2, 4)
    for a in small.elements():
        for b in small.elements():
            assert embed(small.mul(a, b), small, big) == big.mul(embed(a, small, big), embed(b, small, big))
            assert embed(small.add(a, b), small, big) == big.add(embed(a, small, big), embed(b, small, big))


def test_poly_arithmetic(F2):
    t = PolyA.t(F2)
    one = PolyA(F2, (1,))
    assert (t + one) ** 2 == PolyA(F2, (1, 0, 1))
    quot, rem = divmod(PolyA(F2, (1, 0, 1)), t + one)
    assert quot == t + one and rem.is_zero()
    assert PolyA(F2, (1, 1, 0, 0)).degree == 1


def test_poly_from_text_forms(F2, F3):
    assert PolyA.from_text(F2, "t^2+1") == PolyA(F2, (1, 0, 1))
    assert PolyA.from_text(F2, "1,0,1") == PolyA(F2, (1, 0, 1))
    assert PolyA.from_text(F2, "t^2 + t") == PolyA(F2, (0, 1, 1))
    assert PolyA.from_text(F3, "2*t + 5") == PolyA(F3, (2, 2))
    # element codes over F_4
    F4 = get_field(2, 2)
    assert PolyA.from_text(F4, "3*t + 2") == PolyA(F4, (2, 3))


@pytest.mark.parametrize("text", ["t^", "t/2", "1,x", "0,5"])
def test_poly_from_text_rejects(F3, text):
    with pytest.raises(FieldError):
        PolyA.from_text(F3, text)


def test_poly_to_text(F2):
    assert PolyA(F2, (1, 0, 1)).to_text() == "1,0,1"
    assert PolyA(F2).to_text() == "0"


def test_gcd_and_inverse_mod(F3):
    t = PolyA.t(F3)
    f = t * t + 1
    assert poly_gcd(f * (t + 1), f * (t + 2)) == f
    inv = inverse_mod(t, f)
    assert (inv * t) % f == PolyA(F3, (1,))
    with pytest.raises(FieldError):
        inverse_mod(t * t, t)


def test_irreducibles(F2):
    assert [f.to_text() for f in monic_irreducibles(F2, 2)] == ["1,1,1"]
    assert PolyA(F2, (1, 1, 1)).is_irreducible()
    assert not PolyA(F2, (1, 0, 1)).is_irreducible()
    assert PolyA(F2, (0, 0, 1)).valuation(PolyA.t(F2)) == 2


def test_ratf_normal_form(F3):
    t = PolyA.t(F3)
    x = RatF(t * (t + 1), (t + 1).scale(2))
    assert x.den.is_one()
    assert x == RatF(t.scale(2))
    assert RatF.from_text(F3, "1/t") * RatF.t(F3) == 1
    assert RatF.from_text(F3, "1/t").valuation(t) == -1
    with pytest.raises(FieldError):
        RatF(t, PolyA(F3))


def test_ratf_gcd(F2):
    t = RatF.t(F2)
    half = RatF.from_text(F2, "1/t")
    assert ratf_gcd(t, half) == half
    assert ratf_gcd(t * t, t) == t


def test_coefficient_field_modes():
    plain = CoeffField(3)
    with pytest.raises(ModeError):
        plain.lam()
    ext = CoeffField(3, extended=True)
    lam = ext.lam()
    assert ext.t() == -(lam**2)
    assert ext.embed(RatF.t(ext.base)) == ext.t()


def test_root_in_field():
    C = CoeffField(3)
    t = C.t()
    root = C.root_in_field(t * t, 2)
    assert root * root == t * t
    assert C.root_in_field(t, 2) is None


@pytest.mark.parametrize("p, n", [(2, 3), (3, 2), (3, 3), (5, 2)])
def test_field_tables_agree_with_galois(p, n):
    F = get_field(p, n)
    GF = galois_field(p, n)
    assert GF is F.gf
    assert int(GF(F.gen).multiplicative_order()) == F.order - 1
    for a in F.elements():
        assert F.neg(a) == int(-GF(a))
        for b in F.elements():
            assert F.add(a, b) == int(GF(a) + GF(b))
            assert F.mul(a, b) == int(GF(a) * GF(b))


def test_large_odd_extension_adds_without_a_table():
    F = get_field(3, 6)
    assert F._add is None
    a, b = 400, 321
    assert F.sub(F.add(a, b), b) == a
    assert F.add(a, F.neg(a)) == 0
