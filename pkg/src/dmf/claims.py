"""Claim records: one row per checked statement, in a fixed order."""
import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List

from pydantic import BaseModel

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_ERROR = "error"


@dataclass
class CheckReport:
    """Outcome of one numeric or exact check."""

    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": jsonable(self.details)}


class ClaimRecord(BaseModel):
    claim_id: str
    paper_ref: str
    parameters: Dict[str, Any]
    status: str
    details: Dict[str, Any]


def jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, float) and obj in (float("inf"), float("-inf")):
        return "inf" if obj > 0 else "-inf"
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "to_text"):
        return obj.to_text()
    return obj


def claim(claim_id: str, paper_ref: str, parameters: Dict[str, Any], report: CheckReport) -> dict:
    return ClaimRecord(
        claim_id=claim_id,
        paper_ref=paper_ref,
        parameters=jsonable(parameters),
        status=STATUS_PASS if report.passed else STATUS_FAIL,
        details=jsonable(report.details),
    ).dict()


def claim_error(claim_id: str, paper_ref: str, parameters: Dict[str, Any], exc: Exception) -> dict:
    return ClaimRecord(
        claim_id=claim_id,
        paper_ref=paper_ref,
        parameters=jsonable(parameters),
        status=STATUS_ERROR,
        details={"error": f"{type(exc).__name__}: {exc}"},
    ).dict()


def ordered(records: Iterable[dict]) -> List[dict]:
    return sorted(records, key=lambda rec: rec["claim_id"])


def all_passed(records: Iterable[dict]) -> bool:
    return all(rec["status"] == STATUS_PASS for rec in records)


def render(records: Iterable[dict], fmt: str) -> str:
    records = ordered(records)
    if fmt == "json":
        return json.dumps(records, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["claim_id", "paper_ref", "status", "parameters", "details"])
        for rec in records:
            writer.writerow([
                rec["claim_id"],
                rec["paper_ref"],
                rec["status"],
                json.dumps(rec["parameters"], sort_keys=True),
                json.dumps(rec["details"], sort_keys=True),
            ])
        return buf.getvalue()
    lines = [f"{rec['status'].upper():5} {rec['claim_id']}  [{rec['paper_ref']}]" for rec in records]
    return "\n".join(lines) + "\n"
