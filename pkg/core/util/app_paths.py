from __future__ import annotations

import os
from pathlib import Path


class AppPaths:
    """Centralized resolver for project files and run output locations."""

    DEFAULT_APP_SLUG = "attractor-lab"
    DEFAULT_CONFIG_FILENAME = "config.toml"
    DEFAULT_ENV_FILENAME = ".env"
    DEFAULT_OUTPUT_DIRNAME = "out"
    DEFAULT_LOG_DIRNAME = "logs"

    @classmethod
    def project_root(cls) -> Path:
        """Return repository root (the directory holding ``config.toml``)."""
        return Path(__file__).resolve().parents[2]

    @classmethod
    def config_path(cls, filename: str | Path = DEFAULT_CONFIG_FILENAME, root: Path | None = None) -> Path:
        """Return absolute path of the application defaults file under ``root`` (default: project root)."""
        return ((root or cls.project_root()) / filename).resolve()

    @classmethod
    def env_path(cls, filename: str | Path = DEFAULT_ENV_FILENAME, root: Path | None = None) -> Path:
        """Return absolute path of the optional ``.env`` override file."""
        return ((root or cls.project_root()) / filename).resolve()

    @classmethod
    def state_dir(cls) -> Path:
        """Return writable per-user state directory, creating it if needed."""
        base = os.getenv("XDG_STATE_HOME") or str(Path.home() / ".local" / "state")
        path = Path(base).expanduser().resolve() / cls.DEFAULT_APP_SLUG
        path.mkdir(parents=True, exist_ok=True)
        return path

    @classmethod
    def logs_dir(cls) -> Path:
        """Return log directory under state storage."""
        path = cls.state_dir() / cls.DEFAULT_LOG_DIRNAME
        path.mkdir(parents=True, exist_ok=True)
        return path

    @classmethod
    def resolve_output_dir(cls, value: str | Path | None, base: Path | None = None) -> Path:
        """
        Resolve a run output directory.

        Relative paths are taken relative to ``base`` (the run configuration's
        directory) or the current working directory.
        """
        if value is None or str(value).strip() == "":
            value = cls.DEFAULT_OUTPUT_DIRNAME
        path = Path(value).expanduser()
        if not path.is_absolute():
            path = (base or Path.cwd()) / path
        return path.resolve()
