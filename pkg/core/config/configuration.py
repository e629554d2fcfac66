"""
Application defaults.

``config.toml`` (with ``.env`` overrides) is loaded once into an
:class:`AppDefaults` mapping keyed ``SECTION_KEY``. Run files fall back to
these values field by field, so callers ask for a TOML section and key
(``value("integrator", "rel_tol", 1e-9)``) instead of spelling the
flattened name.
"""
from __future__ import annotations

from typing import Any, Mapping, Optional

from core.config.environment_setup import EnvironmentSetup
from core.util.logger import Logger


def flat_key(section: str, key: str) -> str:
    """``("integrator", "rel_tol")`` -> ``"INTEGRATOR_REL_TOL"``."""
    return f"{section.upper()}_{key.upper()}"


class AppDefaults(dict):
    """Flattened defaults looked up by TOML section and key."""

    @classmethod
    def wrap(cls, values: Mapping[str, Any] | None) -> AppDefaults:
        if isinstance(values, cls):
            return values
        return cls(values or {})

    def value(self, section: str, key: str, fallback: Any = None) -> Any:
        """The ``[section] key`` default, or ``fallback`` when the file does not set it."""
        name = flat_key(section, key)
        if name in self:
            Logger.debug(f"Default [{section}] {key} = {self[name]!r}")
            return self[name]
        Logger.debug(f"Default [{section}] {key} not set, using {fallback!r}")
        return fallback


class Config:
    """
    Singleton accessor for the application defaults.

    :cvar _instance: Cached :class:`AppDefaults` shared by every command.
    """

    _instance: Optional[AppDefaults] = None

    @classmethod
    def get(cls) -> AppDefaults:
        if cls._instance is None:
            cls._instance = AppDefaults.wrap(EnvironmentSetup().load())
            Logger.debug(f"Loaded {len(cls._instance)} default(s)")
        return cls._instance

    @classmethod
    def reset(cls):
        """Drop the cached instance so the next ``get`` reloads from disk."""
        cls._instance = None
