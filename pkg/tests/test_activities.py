import pytest
from unittest.mock import MagicMock

import src.dmf.activities as activities_mod
from src.dmf.claims import CheckReport
from src.dmf.config import RunConfig


@pytest.fixture
def small_config():
    return {"q": 2, "r": 2, "kmax": 3, "max_q": 2, "precision": 4}


@pytest.mark.asyncio
async def test_dims_activity_runs_the_real_checks(small_config):
    records = await activities_mod.dims_suite_activity(small_config)
    ids = [rec["claim_id"] for rec in records]
    assert "dims.hilbert.q2r2" in ids
    assert "dims.cusp.q2r2" in ids
    assert all(rec["status"] == "pass" for rec in records), records


@pytest.mark.asyncio
async def test_activity_dispatches_to_suite_runner(monkeypatch, small_config):
    runner = MagicMock(return_value=[{"claim_id": "goss.stub", "status": "pass"}])
    monkeypatch.setitem(activities_mod.SUITE_RUNNERS, "goss", runner)

    res = await activities_mod.goss_suite_activity(small_config)

    assert res == [{"claim_id": "goss.stub", "status": "pass"}]
    cfg = runner.call_args.args[0]
    assert (cfg.q, cfg.r, cfg.kmax) == (2, 2, 3)


@pytest.mark.asyncio
async def test_invalid_config_raises(small_config):
    with pytest.raises(ValueError):
        await activities_mod.goss_suite_activity(dict(small_config, q=6))


def test_collect_turns_exceptions_into_error_records():
    def boom():
        raise ZeroDivisionError("no inverse")

    records = activities_mod._collect([
        ("x.ok", "fine", {"q": 2}, lambda: CheckReport("ok", True)),
        ("x.bad", "broken", {}, boom),
        ("x.fail", "false", {}, lambda: CheckReport("fail", False, {"why": 1})),
    ])
    assert [rec["status"] for rec in records] == ["pass", "error", "fail"]
    assert records[1]["details"]["error"] == "ZeroDivisionError: no inverse"
    assert records[2]["details"] == {"why": 1}


def test_every_suite_has_a_runner_and_an_activity():
    from src.dmf.config import SUITES
    from src.dmf.workflows import SUITE_ACTIVITIES

    assert set(activities_mod.SUITE_RUNNERS) == set(SUITES) == set(SUITE_ACTIVITIES)
    names = {fn.__name__ for fn in activities_mod.ACTIVITIES}
    assert names == set(SUITE_ACTIVITIES.values())


@pytest.mark.parametrize("q, r", [(3, 2), (2, 3)])
def test_symbolic_inverse_falls_back_to_the_function_model(q, r):
    report = activities_mod._symbolic_inverse(RunConfig(q=q, r=r))
    assert report.passed, report.details
    assert report.details["model"] == "function_model"


def test_symbolic_inverse_keeps_normal_forms_when_they_fit():
    assert activities_mod.inverse_weight(2, 2, 2) == 15
    assert activities_mod.inverse_weight(3, 2, 2) == 80
    report = activities_mod._symbolic_inverse(RunConfig())
    assert report.passed, report.details
    assert report.details["model"] == "normal_form"


def _scalar(gamma) -> bool:
    return all((x == gamma[0][0]) if i == j else not x for i, row in enumerate(gamma) for j, x in enumerate(row))


def test_eisenstein_claims_cover_weights_cosets_and_torsion(monkeypatch):
    passing = CheckReport("stub", True)
    slash = MagicMock(return_value=passing)
    split = MagicMock(return_value=passing)
    inversion = MagicMock(return_value=passing)
    monkeypatch.setattr(activities_mod.eisenstein_eval, "slash_transform_check", slash)
    monkeypatch.setattr(activities_mod.eisenstein_eval, "splitting_check", split)
    monkeypatch.setattr(activities_mod.eisenstein_eval, "weight1_inversion_check", inversion)
    monkeypatch.setattr(activities_mod.eisenstein_eval, "doubling_check", MagicMock(return_value=passing))
    monkeypatch.setattr(activities_mod.eisenstein_eval, "goss_consistency_check", MagicMock(return_value=passing))
    monkeypatch.setattr(activities_mod.eisenstein_eval, "alpha_equivariance_check", MagicMock(return_value=passing))

    records = activities_mod.eisenstein_claims(RunConfig())

    assert all(rec["status"] == "pass" for rec in records)
    slash_specs = [c.args[0] for c in slash.call_args_list]
    assert {spec.k for spec in slash_specs} == {1, 2, 3}
    assert any(not spec.coset.v_in_lattice() for spec in slash_specs)
    assert len(slash_specs) == 2 * 3 * 3
    assert not any(_scalar(c.args[1]) for c in slash.call_args_list)
    assert {c.args[0].k for c in split.call_args_list} == {1, 2, 3}
    assert any(not c.args[0].coset.v_in_lattice() for c in split.call_args_list)
    # (t^-1 L - L)/L modulo F_2^x has 3 classes
    assert inversion.call_count == 3
    assert all(not c.args[0].v_in_lattice() for c in inversion.call_args_list)


def test_dims_grid_adds_the_configured_pair():
    assert activities_mod.dims_grid(RunConfig(kmax=3)) == [(2, 2, 3), (2, 3, 3), (3, 2, 3), (3, 3, 3)]
    assert (4, 2, 3) in activities_mod.dims_grid(RunConfig(q=4, r=2, kmax=3))
    assert activities_mod.dims_grid(RunConfig(max_q=2)) == [(2, 2, 6), (2, 3, 6)]
