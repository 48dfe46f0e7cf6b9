import os
from typing import Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, validator

from src.dmf.base_arith import prime_power
from src.dmf.errors import FieldError

SUITES = (
    "goss",
    "eisenstein",
    "uexpansion",
    "coefficients",
    "discriminants",
    "moore",
    "dims",
    "ring",
    "invariants",
    "hecke",
)

OUTPUT_FORMATS = ("json", "csv", "text")

DEFAULT_TEMPORAL_ADDRESS = "localhost:7233"
DEFAULT_TASK_QUEUE = "dmf-verify"


class RunConfig(BaseModel):
    """Parameters shared by the CLI, the in-process suite and the Temporal workflow."""

    max_q: int = 4
    q: int = 2
    r: int = 2
    precision: int = 8
    enumeration_budget: int = 200_000
    slice_budget: int = 5_000
    group_budget: int = 1_000_000
    kmax: int = 6
    goss_k_cap: int = 200
    output_format: str = "json"
    suites: Tuple[str, ...] = SUITES
    seed: int = 0
    schedule: Tuple[int, ...] = (2, 4, 6, 8)
    cache_dir: Optional[str] = None

    @validator("max_q")
    def _max_q_positive(cls, v):
        if v < 2:
            raise ValueError("max_q must be at least 2")
        return v

    @validator("q")
    def _q_prime_power(cls, v, values):
        try:
            prime_power(v)
        except FieldError as exc:
            raise ValueError(str(exc))
        limit = values.get("max_q", 4)
        if v > limit:
            raise ValueError(f"q={v} exceeds the configured maximum {limit}")
        return v

    @validator("r")
    def _rank_at_least_two(cls, v):
        if v < 2:
            raise ValueError("rank r must be at least 2")
        return v

    @validator("precision", "enumeration_budget", "slice_budget", "group_budget", "goss_k_cap")
    def _positive(cls, v, field):
        if v <= 0:
            raise ValueError(f"{field.name} must be positive")
        return v

    @validator("kmax")
    def _kmax_nonnegative(cls, v):
        if v < 0:
            raise ValueError("kmax must be non-negative")
        return v

    @validator("output_format")
    def _known_format(cls, v):
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {', '.join(OUTPUT_FORMATS)}")
        return v

    @validator("suites")
    def _known_suites(cls, v):
        unknown = [s for s in v if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
        return tuple(s for s in SUITES if s in v)

    @validator("schedule")
    def _increasing_schedule(cls, v):
        if len(v) < 2 or any(b <= a for a, b in zip(v, v[1:])) or v[0] < 1:
            raise ValueError("schedule must contain at least two increasing positive exponents")
        return v


class Settings(BaseModel):
    cache_dir: Optional[str] = None
    temporal_address: str = DEFAULT_TEMPORAL_ADDRESS
    task_queue: str = DEFAULT_TASK_QUEUE


def load_settings() -> Settings:
    load_dotenv()
    return Settings(
        cache_dir=os.getenv("DMF_CACHE_DIR") or None,
        temporal_address=os.getenv("TEMPORAL_ADDRESS", DEFAULT_TEMPORAL_ADDRESS),
        task_queue=os.getenv("DMF_TASK_QUEUE", DEFAULT_TASK_QUEUE),
    )
