from __future__ import annotations
from datetime import timedelta
from typing import Any, Dict, List, Optional

from temporalio import workflow
from temporalio.common import RetryPolicy
from temporalio.exceptions import TimeoutError as ActivityTimeoutError

SUITE_ACTIVITIES = {
    "goss": "goss_suite_activity",
    "eisenstein": "eisenstein_suite_activity",
    "uexpansion": "uexpansion_suite_activity",
    "coefficients": "coefficients_suite_activity",
    "discriminants": "discriminants_suite_activity",
    "moore": "moore_suite_activity",
    "dims": "dims_suite_activity",
    "ring": "ring_suite_activity",
    "invariants": "invariants_suite_activity",
    "hecke": "hecke_suite_activity",
}

ACTIVITY_SCHEDULE_TO_CLOSE_TIMEOUT = timedelta(minutes=40)
ACTIVITY_START_TO_CLOSE_TIMEOUT = timedelta(minutes=15)

DEFAULT_RETRY_POLICY = RetryPolicy(
    initial_interval=timedelta(milliseconds=250),
    maximum_interval=timedelta(seconds=2),
    backoff_coefficient=2.0,
    maximum_attempts=3,
    non_retryable_error_types=["ValueError", "TypeError", "ValidationError"],
)


def _timeout_type(exc: BaseException) -> Optional[str]:
    """Name of the Temporal timeout behind an activity failure, None when it was not one."""
    seen: Optional[BaseException] = exc
    while seen is not None:
        if isinstance(seen, ActivityTimeoutError):
            return seen.type.name if seen.type is not None else "UNSPECIFIED"
        seen = seen.__cause__
    return None


def _error_record(suite: str, message: str) -> Dict[str, Any]:
    return {
        "claim_id": f"{suite}.activity",
        "paper_ref": "suite group completed",
        "parameters": {},
        "status": "error",
        "details": {"error": message},
    }


@workflow.defn
class VerifySuiteWorkflow:
    def __init__(self) -> None:
        self.current_step: str = "initialized"
        self._completed: List[str] = []
        self._last_error: Optional[str] = None

    @workflow.run
    async def run(self, config: Dict[str, Any]) -> List[Dict[str, Any]]:
        suites = config.get("suites") or list(SUITE_ACTIVITIES)
        records: List[Dict[str, Any]] = []
        for suite in SUITE_ACTIVITIES:
            if suite not in suites:
                continue
            self.current_step = f"RUNNING_{suite.upper()}"
            try:
                result = await workflow.execute_activity(
                    SUITE_ACTIVITIES[suite],
                    config,
                    schedule_to_close_timeout=ACTIVITY_SCHEDULE_TO_CLOSE_TIMEOUT,
                    start_to_close_timeout=ACTIVITY_START_TO_CLOSE_TIMEOUT,
                    retry_policy=DEFAULT_RETRY_POLICY,
                )
            except Exception as exc:
                timeout = _timeout_type(exc)
                if timeout is not None:
                    self._last_error = f"{suite} activity timed out ({timeout})"
                else:
                    self._last_error = f"{suite} error: {exc}"
                workflow.logger.error("Suite %s failed: %s", suite, self._last_error)
                result = [_error_record(suite, self._last_error)]
            records.extend(result)
            self._completed.append(suite)
        self.current_step = "COMPLETED"
        return sorted(records, key=lambda rec: rec["claim_id"])

    @workflow.query
    def status(self) -> Dict[str, Any]:
        return {
            "current_step": self.current_step,
            "completed": list(self._completed),
            "last_error": self._last_error,
        }
