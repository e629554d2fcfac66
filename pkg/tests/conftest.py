from __future__ import annotations

from pathlib import Path

import pytest

from core.config.configuration import Config
from core.enums.log_level import LogLevel
from core.util.logger import Logger


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    """Return the root directory containing test fixtures."""
    return Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def quiet_logger():
    """Keep the console quiet and the log file off for every test."""
    saved = (Logger.LEVEL, Logger.CONSOLE_OUTPUT_ENABLED, Logger.PERSISTENCE_LOGGING)
    Logger.LEVEL = LogLevel.ERROR
    Logger.CONSOLE_OUTPUT_ENABLED = False
    Logger.PERSISTENCE_LOGGING = False
    yield
    Logger.LEVEL, Logger.CONSOLE_OUTPUT_ENABLED, Logger.PERSISTENCE_LOGGING = saved


@pytest.fixture
def run_defaults() -> dict[str, object]:
    """Application defaults used when building run configurations in tests."""
    return {
        "INTEGRATOR_METHOD": "DOP853",
        "INTEGRATOR_REL_TOL": 1e-9,
        "INTEGRATOR_ABS_TOL": 1e-12,
        "INTEGRATOR_MAX_STEP": 1.0,
        "INTEGRATOR_GUARD_RADIUS": 1e6,
        "INTEGRATOR_BATCH_SIZE": 256,
        "INTEGRATOR_BLOWUP_POLICY": "abort",
        "PULLBACK_TOL": 1e-6,
        "PULLBACK_T0": 5.0,
        "PULLBACK_DEPTH": 5,
        "PULLBACK_CONSECUTIVE_REQUIRED": 2,
        "UNIFORM_MAX_DOUBLINGS": 4,
        "SAMPLING_POINTS_1D": 17,
        "SAMPLING_POINTS_3D": 64,
        "RUN_SEED": 0,
        "RUN_THREADS": 1,
        "RUN_OUTPUT_DIR": "out",
    }


@pytest.fixture
def reset_config():
    """Reload the application defaults before and after a test."""
    Config.reset()
    yield
    Config.reset()
