from __future__ import annotations

from pathlib import Path

import pandas as pd


def write_run_config(directory: Path, text: str, name: str = "run.toml") -> Path:
    """Write a run configuration file and return its path."""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return path


def copy_fixture(fixture_dir: Path, name: str, directory: Path) -> Path:
    """Copy a fixture run configuration so its relative output_dir lands in ``directory``."""
    return write_run_config(directory, (fixture_dir / name).read_text(encoding="utf-8"), name)


def read_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")
