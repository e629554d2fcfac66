from .artifacts import ArtifactError, ArtifactStore
from .commands import (
    CommandResult,
    cmd_equi,
    cmd_oracle,
    cmd_pullback,
    cmd_sweep,
    cmd_uniform,
    cmd_verify_bounds,
)
from .oracle import OracleCase, oracle_frame, run_oracle
from .run_config import ConfigError, RunConfig

__all__ = [
    "ArtifactError",
    "ArtifactStore",
    "CommandResult",
    "ConfigError",
    "OracleCase",
    "RunConfig",
    "cmd_equi",
    "cmd_oracle",
    "cmd_pullback",
    "cmd_sweep",
    "cmd_uniform",
    "cmd_verify_bounds",
    "oracle_frame",
    "run_oracle",
]
