import json

import pytest

import src.dmf.level_t_ring as ring_mod
from src.dmf.base_arith import CoeffField
from src.dmf.errors import BudgetExceeded, SpecError
from src.dmf.level_t_ring import (
    FunctionModel,
    LevelTRing,
    compute_slice,
    delta_power_symbolic_check,
    dickson_generators,
    dickson_independence_check,
    hilbert_check,
    invariance_check,
    invariant_dims_check,
    invariants,
    psi_json,
    rewriting_check,
    symbolic_ring,
    type_decomposition,
    u1_check,
)


@pytest.fixture
def ring22():
    return LevelTRing(2, 2)


def test_slice_dimension_matches_binomial():
    assert compute_slice(3, 2, 2).dim == 7
    assert compute_slice(2, 3, 1).dim == 7
    assert compute_slice(2, 2, 0).dim == 1


def test_slice_limits():
    with pytest.raises(SpecError):
        compute_slice(2, 2, -1)
    with pytest.raises(BudgetExceeded):
        compute_slice(3, 2, 5, budget=10)


def test_hilbert_function():
    report = hilbert_check(2, 2, 4)
    assert report.passed, report.details
    assert [row["dim_linear_algebra"] for row in report.details["rows"]] == [1, 3, 5, 7, 9]


def test_slice_cache_written_and_reused(tmp_path, monkeypatch):
    monkeypatch.setattr(ring_mod, "_SLICES", {})
    sl = ring_mod.get_slice(2, 2, 3, cache_dir=str(tmp_path))
    path = tmp_path / "slice-q2-r2-k3.json"
    assert path.exists()
    assert json.loads(path.read_text())["basis"] == [list(m) for m in sl.basis]

    monkeypatch.setattr(ring_mod, "_SLICES", {})
    monkeypatch.setattr(ring_mod, "compute_slice", lambda *a, **k: pytest.fail("cache not used"))
    assert ring_mod.get_slice(2, 2, 3, cache_dir=str(tmp_path)).basis == sl.basis


def test_rewriting(ring22):
    report = rewriting_check(ring22)
    assert report.passed, report.details


def test_dickson_generators_are_invariant(ring22):
    data = dickson_generators(ring22)
    assert len(data.g) == 2
    assert data.delta is None
    assert invariance_check(ring22, data).passed
    report = dickson_independence_check(ring22, data, 3)
    assert report.passed, report.details
    assert report.details["partitions"] == 2


def test_delta_type_one_over_extended_field():
    ring = LevelTRing(2, 2, CoeffField(2, extended=True))
    data = dickson_generators(ring)
    assert data.delta is not None
    assert invariance_check(ring, data).details["delta_type_one"]
    assert delta_power_symbolic_check(ring).passed


@pytest.mark.parametrize("k, expected", [(1, 2), (2, 3), (3, 4)])
def test_u1_invariants(ring22, k, expected):
    assert invariants(ring22, k, "U1").dim == expected
    report = u1_check(ring22, k)
    assert report.passed, report.details


def test_invariant_dimensions(ring22):
    report = invariant_dims_check(ring22, 3)
    assert report.passed, report.details


def test_invariants_reject_bad_type():
    with pytest.raises(SpecError):
        invariants(LevelTRing(3, 2), 1, "GL", 2)


def test_type_decomposition_q3():
    ring = LevelTRing(3, 2, CoeffField(3, extended=True))
    report = type_decomposition(ring, 4)
    assert report.passed, report.details
    assert report.details["rows"][1]["dim"] == 1


def test_symbolic_ring_falls_back_to_function_model():
    assert isinstance(symbolic_ring(2, 2, 2), LevelTRing)
    model = symbolic_ring(3, 2, 8, extended=True, budget=10)
    assert isinstance(model, FunctionModel)
    assert delta_power_symbolic_check(model).passed


def test_psi_json(ring22):
    data = psi_json(ring22)
    assert data["a"] == "0,1"
    assert data["model"] == "normal_form"
    assert len(data["coefficients"]) == 3
    assert data["coefficients"][0]["terms"][0][1] == "0,1"

    model = psi_json(FunctionModel(2, 2))
    assert model["model"] == "function_model"
    assert len(model["coefficients"]) == 3
