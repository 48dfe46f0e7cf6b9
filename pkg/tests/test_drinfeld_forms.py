from fractions import Fraction

import pytest

from src.dmf import drinfeld_forms as dforms
from src.dmf.base_arith import CoeffField, PolyA, RatF, get_field
from src.dmf.cinfty_model import TailElement
from src.dmf.errors import BudgetExceeded, NormalFormError, SpecError
from src.dmf.lattice_geom import LatticeCoset, standard_point
from src.dmf.mpoly import PolyRing


@pytest.fixture
def generic_psi():
    """t X + g X^2 + D X^4 over F_2(t)[g, D]."""
    C = CoeffField(2)
    R = PolyRing(C, 2)
    g, D = R.gens()
    return dforms.AdditivePolynomial(R, 2, [R.constant(C.t()), g, D])


def test_q_power_index():
    assert dforms.q_power_index(1, 3) == 0
    assert dforms.q_power_index(9, 3) == 2
    assert dforms.q_power_index(6, 3) is None


def test_additive_polynomial_basics():
    C = CoeffField(2)
    f = dforms.AdditivePolynomial(C, 2, [C.one, C.t(), C.zero])
    assert f.degree == 1
    assert f.evaluate(C.t()) == C.t() + C.t() ** 3
    ident = dforms.AdditivePolynomial.identity(C, 2)
    assert f.compose(ident).coeffs == f.coeffs
    assert ident.compose(f).coeffs == f.coeffs
    assert dforms.AdditivePolynomial(C, 2, [C.zero]).degree == -1


def test_psi_a_matches_powers(generic_psi):
    F = get_field(2)
    t2 = PolyA(F, (0, 0, 1))
    full = dforms.psi_a(generic_psi, t2)
    assert full.coeffs == dforms.psi_power(generic_psi, 2).coeffs
    top = dforms.psi_power(generic_psi, 2, top_only=True)
    assert top.degree == 4
    assert top.top() == full.top()
    D = generic_psi.top()
    assert full.top() == D**5
    with pytest.raises(SpecError):
        dforms.psi_a(generic_psi, PolyA(F))


def test_symbolic_discriminant_relations(generic_psi):
    F = get_field(2)
    t = PolyA.t(F)
    report = dforms.discriminant_relations_symbolic(generic_psi, 2, t * t, t + 1)
    assert report.passed, report.details
    assert report.details["exponent"] == 5
    top = dforms.discriminant_relations_symbolic(generic_psi, 2, t, t * t, top_only=True)
    assert top.passed
    with pytest.raises(SpecError):
        dforms.discriminant_relations_symbolic(generic_psi, 2, t + 1, t, top_only=True)


def test_coefficient_recursion_inverts_the_exponential(generic_psi):
    F = get_field(2)
    forms = dforms.coefficient_recursion(generic_psi, PolyA.t(F), 2)
    assert dforms.compositional_inverse_check(forms, 2, generic_psi.ring, 2).passed
    with pytest.raises(SpecError):
        dforms.compositional_inverse_check(forms, 2, generic_psi.ring, 3)


def test_psi_from_values_rejects_nonvanishing_middle_terms():
    C = CoeffField(3)
    # two arbitrary values leave a nonzero X^5 coefficient
    with pytest.raises(NormalFormError):
        dforms.psi_from_values(C, 3, C.t(), [C.t(), C.one])


def test_moore_determinant_rank_two_over_f2():
    R = PolyRing(get_field(2), 2)
    x, y = R.gens()
    assert dforms.moore_det(R, [x, y], 2) == x * (x + y) * y


@pytest.mark.parametrize("q, n", [(2, 3), (3, 2), (4, 2)])
def test_moore_product_and_transform(q, n):
    F = get_field(*{2: (2, 1), 3: (3, 1), 4: (2, 2)}[q])
    R = PolyRing(F, n)
    xs = R.gens()
    assert dforms.moore_product_check(R, xs, q).passed
    B = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    B[0][n - 1] = 1
    B[n - 1][n - 1] = F.order - 1 if F.n == 1 else F.gen
    report = dforms.moore_transform_check(R, xs, B, q)
    assert report.passed
    assert report.details["det"] == B[n - 1][n - 1]


def test_moore_size_limits():
    R = PolyRing(get_field(2), 7)
    with pytest.raises(BudgetExceeded):
        dforms.moore_det(R, R.gens(), 2)
    with pytest.raises(SpecError):
        dforms.moore_det(R, [], 2)


def test_delta_sign():
    assert dforms.delta_sign(3, 4) == -1
    assert dforms.delta_sign(3, 13) == 1
    assert dforms.delta_sign(2, 3) == 1


def test_numeric_psi_t_q2():
    F = get_field(2)
    L = LatticeCoset.standard(F, 2)
    psi = dforms.psi_from_torsion(PolyA.t(F), L, standard_point(2, 2), 4)
    assert psi.degree == 2
    assert psi.coeff(0).agrees(TailElement.t(2))
    assert not psi.top().is_zero()


def test_delta_power_q2():
    F = get_field(2)
    report = dforms.delta_power_check(PolyA.t(F), LatticeCoset.standard(F, 2), standard_point(2, 2), 4)
    assert report.passed, report.details


PREC = 8
SCHEDULE = [2, 4, 6, 8]


@pytest.fixture
def rank2():
    F = get_field(2)
    return PolyA.t(F), LatticeCoset.standard(F, 2), standard_point(2, 2)


def test_recursion_matches_exponential_and_series(rank2):
    _, L, omega = rank2
    report = dforms.recursion_numeric_check(L, omega, PREC, 2)
    assert report.passed, report.details
    assert [row["k"] for row in report.details["rows"]] == [1, 2]


def test_ideal_recursion(rank2):
    t, L, omega = rank2
    report = dforms.ideal_recursion_check(t, L, omega, PREC)
    assert report.passed, report.details
    assert len(report.details["rows"]) == 3


@pytest.mark.parametrize("prec", [2, 4, 8])
def test_isogeny_functional_at_a_torsion_point(rank2, prec):
    # t^-1/2 = omega_1 / t is a period of t^-1 L, so both sides vanish
    t, L, omega = rank2
    z = TailElement.monomial(2, Fraction(-1, 2))
    report = dforms.isogeny_functional_check(t, L, omega, z, prec)
    assert report.passed, report.details


def test_isogeny_functional_at_a_generic_point(rank2):
    t, L, omega = rank2
    report = dforms.isogeny_functional_check(t, L, omega, TailElement.monomial(2, Fraction(-1, 3)), PREC)
    assert report.passed, report.details
    assert report.details["precision"] > 0


def test_torsion_product_is_linear(rank2):
    t, L, omega = rank2
    x = TailElement.monomial(2, Fraction(-1, 3))
    y = TailElement.monomial(2, Fraction(-1, 2)) + TailElement.monomial(2, -1)
    report = dforms.torsion_linearity_check(t, L, omega, PREC, x, y, 1)
    assert report.passed, report.details


def test_numeric_discriminant_relations(rank2):
    t, L, omega = rank2
    report = dforms.discriminant_relations_numeric(t, t, L, omega, PREC)
    assert report.passed, report.details
    assert report.details["exponent"] == 1


def test_scaling_law(rank2):
    t, L, omega = rank2
    assert dforms.scaling_law_check(RatF(t), t, L, omega, PREC).passed


def test_isogeny_relation_constant(rank2):
    _, L, omega = rank2
    report = dforms.isogeny_relation_check(L, [omega, standard_point(2, 2, "perturbed")], PREC)
    assert report.passed, report.details
    assert report.details["expected"] == "t^{3}"
    assert len(report.details["rows"]) == 2


def test_delta_order_at_the_boundary(rank2):
    _, L, omega = rank2
    report = dforms.delta_order_check(L, omega, SCHEDULE, PREC)
    assert report.passed, report.details
    assert report.details["predicted_level"] == 2


@pytest.mark.parametrize("k, vanishes", [(1, False), (2, True)])
def test_boundary_limit(rank2, k, vanishes):
    t, L, omega = rank2
    report = dforms.boundary_limit_check(t, k, L, omega, SCHEDULE, PREC)
    assert report.passed, report.details
    assert report.details["limit_is_zero"] is vanishes
