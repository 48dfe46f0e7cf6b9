import pytest

from src.dmf.base_arith import PolyA, get_field
from src.dmf.errors import BudgetExceeded, SpecError
from src.dmf.hecke_engine import (
    LocalDatum,
    count_valuation,
    global_identity_check,
    hecke_spec_from_json,
    index_valuation,
    local_check,
    local_cosets,
    membership_check,
    rank2_eigenvalue_check,
    two_prime_example,
)


@pytest.fixture
def t2():
    return PolyA.t(get_field(2))


def test_local_small_case(t2):
    datum = LocalDatum(t2, (1, 0))
    assert datum.case() == "small"
    report = local_check(datum)
    assert report.passed, report.details
    assert report.details["index"] == 3
    assert report.details["group_order"] == 6
    assert report.details["stabilizer_order"] == 2


def test_local_primitive_case(t2):
    datum = LocalDatum(t2, (2, 0))
    assert datum.case() == "primitive"
    assert local_check(datum).passed


def test_trivial_mu_has_index_one(t2):
    report = local_check(LocalDatum(t2, (0, 0)))
    assert report.passed
    assert report.details["index"] == 1


def test_case_classification(t2):
    assert LocalDatum(t2, (3, 0, 0)).case() == "degenerate"
    assert LocalDatum(t2, (2, 1, 0)).case() == "primitive"


@pytest.mark.parametrize("mu", [(1,), (0, 1), (2, 1), (1, -1)])
def test_bad_mu(t2, mu):
    with pytest.raises(SpecError):
        LocalDatum(t2, mu)


def test_pi_must_be_monic_irreducible(t2):
    with pytest.raises(SpecError):
        LocalDatum(t2 * t2, (1, 0))
    F3 = get_field(3)
    with pytest.raises(SpecError):
        LocalDatum(PolyA(F3, (0, 2)), (1, 0))


def test_group_budget(t2):
    with pytest.raises(BudgetExceeded) as exc:
        local_cosets(LocalDatum(t2, (2, 0)), budget=100)
    assert exc.value.estimate == 256


def test_valuations():
    assert index_valuation((1, 0)) == 0
    assert index_valuation((3, 0)) == 2
    assert index_valuation((2, 1, 0)) == 1
    assert count_valuation((1, 0), 0) == 0


def test_spec_from_json():
    spec = hecke_spec_from_json({"delta": [["t", "0"], ["0", "1"]]}, 2)
    assert [(d.pi.to_text(), d.mu) for d in spec.local] == [("0,1", (1, 0))]
    assert not spec.degenerate()


@pytest.mark.parametrize(
    "delta, where",
    [
        ([["1/t", "0"], ["0", "1"]], "assumption (a)"),
        ([["t", "0"], ["0", "t"]], "assumption (c)"),
    ],
)
def test_spec_assumptions(delta, where):
    with pytest.raises(SpecError) as exc:
        hecke_spec_from_json({"delta": delta}, 2)
    assert where in str(exc.value)


def test_spec_needs_delta():
    with pytest.raises(SpecError):
        hecke_spec_from_json({"source": {}}, 2)


def test_global_identity_two_primes():
    spec = two_prime_example(2)
    assert spec.primitive_primes()
    report = global_identity_check(spec)
    assert report.passed, report.details["mismatches"]
    assert report.details["box"] == 1024


def test_global_box_budget():
    with pytest.raises(BudgetExceeded):
        global_identity_check(two_prime_example(2), box_budget=10)


def test_membership(t2):
    report = membership_check(t2)
    assert report.passed, report.details
    assert report.details["sublattices"] == 3


def test_rank2_eigenvalue(t2):
    report = rank2_eigenvalue_check(t2, 1, prec=4)
    assert report.passed, report.details
    assert report.details["representatives"] == 3
