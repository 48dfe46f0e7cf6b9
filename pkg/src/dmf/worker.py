import asyncio
import logging

from temporalio.client import Client
from temporalio.worker import Worker

from src.dmf import activities as activities_mod
from src.dmf import workflows as workflows_mod
from src.dmf.config import load_settings

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger("dmf.worker")


async def run_worker() -> None:
    settings = load_settings()
    client = await Client.connect(settings.temporal_address)
    worker = Worker(
        client,
        task_queue=settings.task_queue,
        workflows=[workflows_mod.VerifySuiteWorkflow],
        activities=activities_mod.ACTIVITIES,
    )
    try:
        logger.info("Starting worker for task queue: %s", settings.task_queue)
        await worker.run()
    except Exception:
        logger.exception("Worker on %s exited", settings.task_queue)
        raise


if __name__ == "__main__":
    asyncio.run(run_worker())
