import pytest
from pydantic import ValidationError

from src.dmf.config import SUITES, RunConfig, load_settings


def test_defaults():
    cfg = RunConfig()
    assert (cfg.q, cfg.r, cfg.max_q) == (2, 2, 4)
    assert cfg.suites == SUITES


@pytest.mark.parametrize(
    "values",
    [
        {"q": 6},
        {"q": 1},
        {"q": 5},
        {"r": 1},
        {"precision": 0},
        {"kmax": -1},
        {"output_format": "xml"},
        {"suites": ("goss", "lunar")},
        {"schedule": (4, 2)},
        {"schedule": (2,)},
    ],
)
def test_invalid_values_rejected(values):
    with pytest.raises(ValidationError):
        RunConfig(**values)


def test_q_up_to_max_q():
    assert RunConfig(q=5, max_q=5).q == 5
    assert RunConfig(q=9, max_q=9).q == 9


def test_suites_are_put_in_canonical_order():
    cfg = RunConfig(suites=("hecke", "goss"))
    assert cfg.suites == ("goss", "hecke")


def test_load_settings_reads_env(monkeypatch):
    monkeypatch.setenv("DMF_CACHE_DIR", "/tmp/slices")
    monkeypatch.setenv("DMF_TASK_QUEUE", "dmf-test")
    monkeypatch.delenv("TEMPORAL_ADDRESS", raising=False)
    settings = load_settings()
    assert settings.cache_dir == "/tmp/slices"
    assert settings.task_queue == "dmf-test"
    assert settings.temporal_address == "localhost:7233"
