import csv
import io
import json
from fractions import Fraction

import pytest

from src.dmf import cli
from src.dmf.config import RunConfig


@pytest.fixture(autouse=True)
def no_cache_dir(monkeypatch):
    monkeypatch.delenv("DMF_CACHE_DIR", raising=False)


def test_dims_csv(capsys):
    assert cli.main(["dims", "--q", "3", "--r", "2", "--kmax", "3"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == ["k,dim", "0,1", "1,4", "2,7", "3,10"]


def test_invalid_q_exit_code(capsys):
    assert cli.main(["dims", "--q", "6"]) == 2
    assert "invalid parameters" in capsys.readouterr().err


def test_goss(capsys):
    assert cli.main(["goss", "--q", "2", "--k", "3"]) == 0
    assert capsys.readouterr().out == "X^3 + X^2*Y1\n"


def test_goss_k_out_of_range(capsys):
    assert cli.main(["goss", "--k", "0"]) == 2


def test_ring_dims_match(capsys):
    assert cli.main(["ring", "dims", "--q", "2", "--r", "2", "--kmax", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,dim_formula,dim_linear_algebra,match"
    assert lines[-1] == "3,7,7,true"


def test_hecke_local(capsys):
    assert cli.main(["hecke", "local", "--mu", "1,0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]
    assert report["details"]["index"] == 3


def test_hecke_local_bad_mu(capsys):
    assert cli.main(["hecke", "local", "--mu", "0,1"]) == 2
    assert cli.main(["hecke", "local", "--mu", "a,b"]) == 2


def test_hecke_global_reports_json_location(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text('{"delta": [["t", "0"],\n ["0" "1"]]}')
    assert cli.main(["hecke", "global", "--spec", str(path)]) == 2
    assert f"{path}:2:" in capsys.readouterr().err


def test_eisenstein_eval(tmp_path, capsys):
    coset = tmp_path / "coset.json"
    coset.write_text('{"basis": [["1", "0"], ["0", "1"]], "v": ["1/t", "0"]}')
    assert cli.main(["eisenstein", "eval", "--k", "1", "--prec", "4", "--coset", str(coset)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["certified_precision"] >= 4
    assert payload["method"] in ("direct", "ball", "fibered")
    assert payload["certified"]


def test_drinfeld_psi_symbolic(capsys):
    assert cli.main(["drinfeld", "psi", "--q", "2", "--r", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mode"] == "symbolic"
    assert payload["model"] == "normal_form"
    assert len(payload["coefficients"]) == 3


def test_verify_single_suite(capsys):
    code = cli.main(["verify", "--suite", "dims", "--q", "2", "--max-q", "2", "--kmax", "3", "--format", "text"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines
    assert all(line.startswith("PASS") for line in lines)
    assert any("dims.hilbert.q2r2" in line for line in lines)


@pytest.mark.parametrize("prec, expected", [(None, None), (Fraction(4), 4), (Fraction(7, 2), 3.5)])
def test_precision_number(prec, expected):
    value = cli._precision_number(prec)
    assert value == expected
    assert type(value) is type(expected)


def test_verify_dims_defaults_to_csv(capsys):
    code = cli.main(["verify", "--suite", "dims", "--q", "3", "--r", "3", "--kmax", "4"])
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert code == 0
    assert rows[0] == ["claim_id", "paper_ref", "status", "parameters", "details"]
    assert "dims.hilbert.q3r3" in [row[0] for row in rows[1:]]
    assert all(row[2] == "pass" for row in rows[1:])
    hilbert = next(row for row in rows[1:] if row[0] == "dims.hilbert.q3r3")
    assert all(r["match"] for r in json.loads(hilbert[4])["rows"])


def test_default_config_passes_every_claim():
    status, records = cli.run_suite(RunConfig())
    failing = [(rec["claim_id"], rec["details"]) for rec in records if rec["status"] != "pass"]
    assert failing == []
    assert status == cli.EXIT_OK
    ids = {rec["claim_id"] for rec in records}
    assert "coefficients.isogeny_functional.q2r2" in ids
    assert "coefficients.inverse_symbolic.q2r2" in ids
