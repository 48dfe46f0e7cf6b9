import csv
import io
import json
from fractions import Fraction

from src.dmf.claims import CheckReport, all_passed, claim, claim_error, jsonable, ordered, render


def _records():
    return [
        claim("b.second", "second", {"q": 2}, CheckReport("x", False, {"gap": Fraction(1, 2)})),
        claim("a.first", "first", {"q": 2}, CheckReport("y", True, {"n": 3})),
        claim_error("c.third", "third", {}, RuntimeError("boom")),
    ]


def test_claim_status_and_details():
    recs = _records()
    assert [r["status"] for r in recs] == ["fail", "pass", "error"]
    assert recs[0]["details"] == {"gap": "1/2"}
    assert recs[2]["details"] == {"error": "RuntimeError: boom"}


def test_ordered_and_all_passed():
    recs = ordered(_records())
    assert [r["claim_id"] for r in recs] == ["a.first", "b.second", "c.third"]
    assert not all_passed(recs)
    assert all_passed(recs[:1])


def test_jsonable_handles_infinities_and_nested():
    assert jsonable({1: [Fraction(3), float("inf")], "k": (float("-inf"),)}) == {"1": ["3", "inf"], "k": ["-inf"]}


def test_render_json_is_sorted_and_stable():
    out = render(_records(), "json")
    assert out == render(list(reversed(_records())), "json")
    assert [r["claim_id"] for r in json.loads(out)] == ["a.first", "b.second", "c.third"]


def test_render_csv():
    rows = list(csv.reader(io.StringIO(render(_records(), "csv"))))
    assert rows[0] == ["claim_id", "paper_ref", "status", "parameters", "details"]
    assert rows[1][:3] == ["a.first", "first", "pass"]
    assert json.loads(rows[2][4]) == {"gap": "1/2"}


def test_render_text():
    lines = render(_records(), "text").splitlines()
    assert lines[0] == "PASS  a.first  [first]"
    assert lines[2].startswith("ERROR c.third")
