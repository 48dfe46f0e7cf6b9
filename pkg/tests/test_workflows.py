import time

import pytest
from temporalio import activity
from temporalio.exceptions import TimeoutError as ActivityTimeoutError
from temporalio.exceptions import TimeoutType
from temporalio.testing import WorkflowEnvironment
from temporalio.worker import Worker

from src.dmf.workflows import VerifySuiteWorkflow, _timeout_type

TASK_QUEUE = "dmf-test"


def _record(claim_id: str, status: str = "pass") -> dict:
    return {"claim_id": claim_id, "paper_ref": "stub", "parameters": {}, "status": status, "details": {}}


@activity.defn(name="goss_suite_activity")
async def td_goss(config: dict):
    return [_record("goss.b"), _record("goss.a")]


@activity.defn(name="dims_suite_activity")
async def td_dims(config: dict):
    return [_record("dims.hilbert", "fail")]


@activity.defn(name="hecke_suite_activity")
async def td_hecke_fails(config: dict):
    raise TypeError("local datum exploded")


@pytest.mark.asyncio
async def test_selected_suites_sorted_by_claim_id():
    async with (await WorkflowEnvironment.start_time_skipping()) as env:
        worker = Worker(env.client, task_queue=TASK_QUEUE, workflows=[VerifySuiteWorkflow], activities=[td_goss, td_dims])
        async with worker:
            wf_id = f"verify-ok-{int(time.time())}"
            handle = await env.client.start_workflow(
                VerifySuiteWorkflow.run,
                {"q": 2, "r": 2, "suites": ["goss", "dims"]},
                id=wf_id,
                task_queue=TASK_QUEUE,
            )
            records = await handle.result()
            assert [rec["claim_id"] for rec in records] == ["dims.hilbert", "goss.a", "goss.b"]

            status = await handle.query("status")
            assert status["current_step"] == "COMPLETED"
            assert status["completed"] == ["goss", "dims"]
            assert status["last_error"] is None


@pytest.mark.asyncio
async def test_failing_activity_becomes_error_record():
    async with (await WorkflowEnvironment.start_time_skipping()) as env:
        worker = Worker(
            env.client,
            task_queue=TASK_QUEUE,
            workflows=[VerifySuiteWorkflow],
            activities=[td_goss, td_hecke_fails],
        )
        async with worker:
            wf_id = f"verify-fail-{int(time.time())}"
            handle = await env.client.start_workflow(
                VerifySuiteWorkflow.run,
                {"q": 2, "r": 2, "suites": ["goss", "hecke"]},
                id=wf_id,
                task_queue=TASK_QUEUE,
            )
            records = await handle.result()
            by_id = {rec["claim_id"]: rec for rec in records}
            assert by_id["hecke.activity"]["status"] == "error"
            assert "hecke error" in by_id["hecke.activity"]["details"]["error"]
            assert by_id["goss.a"]["status"] == "pass"

            status = await handle.query("status")
            assert status["current_step"] == "COMPLETED"
            assert status["last_error"].startswith("hecke error")


def test_timeout_type_walks_the_cause_chain():
    timeout = ActivityTimeoutError("activity timeout", type=TimeoutType.START_TO_CLOSE, last_heartbeat_details=[])
    wrapper = RuntimeError("activity task failed")
    wrapper.__cause__ = timeout
    assert _timeout_type(wrapper) == "START_TO_CLOSE"
    assert _timeout_type(timeout) == "START_TO_CLOSE"
    assert _timeout_type(RuntimeError("the request timed out")) is None
