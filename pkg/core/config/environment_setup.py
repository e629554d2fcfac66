"""
EnvironmentSetup Module
=======================

Unified loading of the application defaults. Values are read and merged from:

- `config.toml` (always)
- `.env` (when present next to `config.toml`)
- Environment variables that override known TOML keys
- Automatic type casting & validation through `ConfigValidator`

The module also configures logging behavior based on the loaded settings.
"""

import os
from pathlib import Path
from typing import Any
from dotenv import load_dotenv

from core.util.logger import Logger
from core.util.app_paths import AppPaths

# TOML: built-in in Python 3.11+, fallback to tomli for older versions
try:
    import tomllib
except ImportError:
    import tomli as tomllib

from core.util.validator import ConfigValidator


class EnvironmentSetup:
    """
    Handles loading of the application defaults.

    This class loads `config.toml`, and optionally `.env`, merges their values,
    performs type casting and validation, and configures logging based on the
    resulting configuration.

    Features
    --------
    - Loads and parses TOML configuration
    - Optionally loads `.env` overrides for known keys
    - Automatically casts types using `ConfigValidator`
    - Configures logging using either `.env` or TOML settings
    - Returns a flattened dictionary of all settings

    Parameters
    ----------
    env_path : str | Path, optional
        Name or path of the `.env` file (default: ".env").
    toml_path : str | Path, optional
        Name or path of the TOML config file (default: "config.toml").
    root : Path, optional
        Directory the relative paths are resolved against (default: project root).
    """

    def __init__(self, env_path: str | Path = ".env", toml_path: str | Path = "config.toml", root: Path | None = None):
        self.validator = ConfigValidator()
        self.project_root = Path(root).resolve() if root is not None else AppPaths.project_root()

        self.toml_path = AppPaths.config_path(toml_path, self.project_root)
        self.env_path = AppPaths.env_path(env_path, self.project_root)

        # Load TOML (always)
        self.toml_data = self._load_toml()

        self.env_loaded = False
        if self.env_path.exists():
            load_dotenv(dotenv_path=self.env_path)
            self.env_loaded = True
            Logger.configure_from_env(self.project_root)
        else:
            self._configure_logging_from_toml()

    def _configure_logging_from_toml(self):
        """
        Configure logging from the `[logging]` table when no `.env` exists.

        Keys: `console_output`, `level`, `persistence_logging`, `log_dir`.
        Missing keys fall back to warnings on the console only.
        """
        section = (self.toml_data or {}).get("logging", {})
        try:
            level = self.validator.parse_log_level(section.get("level", "WARNING"))
        except ValueError:
            level = Logger.LEVEL
        persistence_logging = bool(section.get("persistence_logging", False))
        log_dir = section.get("log_dir")
        if log_dir:
            log_dir = Path(log_dir).expanduser()
        elif persistence_logging:
            log_dir = AppPaths.logs_dir()
        Logger.configure(
            level=level,
            console_output=bool(section.get("console_output", True)),
            persistence_logging=persistence_logging,
            log_dir=log_dir,
            session_label=(self.toml_data or {}).get("app", {}).get("name"),
        )

    def _load_toml(self) -> dict[str, Any] | None:
        """
        Load and parse the TOML configuration file.

        Returns
        -------
        dict[str, Any] | None
            Parsed TOML data, or None if the file does not exist.
        """
        if not self.toml_path.exists():
            return None
        with open(self.toml_path, "rb") as f:
            return tomllib.load(f)

    def _auto_cast(self, key: str, value: str) -> Any:
        """
        Automatically infer and cast environment variable values to the correct types.

        The method tries the following cast rules:
        - Special keys:
            * LOGGING_LEVEL → parsed using validator.parse_log_level
            * *_BLOWUP_POLICY → parsed using validator.parse_blowup_policy
        - Boolean (true/false strings)
        - Positive integer
        - Finite float (tolerances, radii)
        - Directory path (absolute, created if needed)
        - Default: return as string
        """
        v = self.validator

        if key == "LOGGING_LEVEL":
            return v.parse_log_level(value)
        if key.endswith("BLOWUP_POLICY"):
            return v.parse_blowup_policy(value, key)

        # Try boolean
        try:
            return v.ensure_boolean(value, key)
        except ValueError:
            pass

        # Try positive integer
        try:
            return v.ensure_positive_int(value, key)
        except ValueError:
            pass

        try:
            return v.ensure_finite_float(value, key)
        except ValueError:
            pass

        if key.endswith("_DIR"):
            return v.validate_directory_path(value, create_if_missing=True)

        # Default: string
        return v.ensure_string(value, "", key)

    def load(self) -> dict:
        """
        Load, merge, flatten, and return the final application configuration.

        The result includes:
        - Flattened TOML values (e.g. `[integrator].rel_tol` → `INTEGRATOR_REL_TOL`)
        - .env overrides for keys already present in the TOML
        - Auto-casted types for `.env` values

        Returns
        -------
        dict
            A flat configuration dictionary with merged values.
        """
        config = {}

        if self.toml_data is None:
            Logger.error(f"Failed to load TOML configuration from {self.toml_path}")
            return config

        # Flatten TOML sections
        for section, values in self.toml_data.items():
            for key, value in values.items():
                config[f"{section.upper()}_{key.upper()}"] = value

        # Merge `.env` overrides only for known config keys.
        # This avoids importing unrelated process env vars such as PATH/XDG_*.
        if self.env_loaded:
            for key in tuple(config.keys()):
                if key not in os.environ:
                    continue
                value = os.environ.get(key)
                try:
                    config[key] = self._auto_cast(key, value)
                except Exception:
                    config[key] = value  # Fallback

        return config
