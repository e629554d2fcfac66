import math
from pathlib import Path
from typing import Any, Sequence

from core.enums.blowup_policy import BlowUpPolicy
from core.enums.log_level import LogLevel
from core.enums.system_kind import SystemKind


class ConfigValidator:
    """
    Validation and type-conversion utilities for configuration values.

    Provides centralized input validation for values coming from ``config.toml``,
    ``.env`` overrides and per-run configuration files. Every check raises
    :class:`ValueError` with the dotted field name so callers can collect
    messages and report them together.
    """

    @staticmethod
    def ensure_positive_int(value: Any, field_name: str = "value") -> int:
        """
        Ensure the value is a positive integer.

        :param value: Raw input value.
        :param field_name: Name of the field for error messages.
        :returns: Positive integer.
        :raises ValueError: If value is not a positive integer.
        """
        if isinstance(value, bool):
            raise ValueError(f"{field_name} must be a positive integer, got {value!r}")
        try:
            int_value = int(value)
        except (ValueError, TypeError) as e:
            raise ValueError(f"{field_name} must be a positive integer, got {value!r}") from e
        if int_value != value and not isinstance(value, str):
            raise ValueError(f"{field_name} must be a positive integer, got {value!r}")
        if int_value <= 0:
            raise ValueError(f"{field_name} must be positive, got {value!r}")
        return int_value

    @staticmethod
    def ensure_nonnegative_int(value: Any, field_name: str = "value") -> int:
        """Ensure the value is an integer >= 0."""
        if isinstance(value, bool):
            raise ValueError(f"{field_name} must be a non-negative integer, got {value!r}")
        try:
            int_value = int(value)
        except (ValueError, TypeError) as e:
            raise ValueError(f"{field_name} must be a non-negative integer, got {value!r}") from e
        if int_value < 0:
            raise ValueError(f"{field_name} must be non-negative, got {value!r}")
        return int_value

    @staticmethod
    def ensure_finite_float(value: Any, field_name: str = "value") -> float:
        """Ensure the value is a finite real number."""
        if isinstance(value, bool):
            raise ValueError(f"{field_name} must be a number, got {value!r}")
        try:
            float_value = float(value)
        except (ValueError, TypeError) as e:
            raise ValueError(f"{field_name} must be a number, got {value!r}") from e
        if not math.isfinite(float_value):
            raise ValueError(f"{field_name} must be finite, got {value!r}")
        return float_value

    @classmethod
    def ensure_positive_float(cls, value: Any, field_name: str = "value") -> float:
        """Ensure the value is a finite real number > 0."""
        float_value = cls.ensure_finite_float(value, field_name)
        if float_value <= 0.0:
            raise ValueError(f"{field_name} must be positive, got {value!r}")
        return float_value

    @classmethod
    def ensure_nonnegative_float(cls, value: Any, field_name: str = "value") -> float:
        """Ensure the value is a finite real number >= 0."""
        float_value = cls.ensure_finite_float(value, field_name)
        if float_value < 0.0:
            raise ValueError(f"{field_name} must be non-negative, got {value!r}")
        return float_value

    @classmethod
    def ensure_unit_interval(cls, value: Any, field_name: str = "value") -> float:
        """Ensure the value lies strictly inside (0, 1), as tolerances must."""
        float_value = cls.ensure_finite_float(value, field_name)
        if not 0.0 < float_value < 1.0:
            raise ValueError(f"{field_name} must lie in (0, 1), got {value!r}")
        return float_value

    @classmethod
    def ensure_strictly_increasing(cls, values: Any, field_name: str = "value") -> tuple[float, ...]:
        """Ensure a non-empty list of finite reals sorted strictly increasing."""
        if isinstance(values, (str, bytes)) or not isinstance(values, Sequence):
            raise ValueError(f"{field_name} must be a list of numbers")
        if not values:
            raise ValueError(f"{field_name} must not be empty")
        floats = tuple(cls.ensure_finite_float(v, f"{field_name}[{i}]") for i, v in enumerate(values))
        if any(b <= a for a, b in zip(floats, floats[1:])):
            raise ValueError(f"{field_name} must be strictly increasing")
        return floats

    @staticmethod
    def ensure_boolean(value: Any, field_name: str = "value") -> bool:
        """
        Ensure the value represents a boolean.

        :raises ValueError: If value cannot be interpreted as boolean.
        """
        if isinstance(value, bool):
            return value
        if isinstance(value, str):
            if value.lower() in ('true', 'yes', '1', 'on'):
                return True
            elif value.lower() in ('false', 'no', '0', 'off'):
                return False
        raise ValueError(f"{field_name} must be a boolean, got {value!r}")

    @staticmethod
    def ensure_string(value: Any, default: str, field_name: str = "value") -> str:
        """Ensure the value is a string, using ``default`` for None."""
        if value is None:
            return default
        return str(value)

    @staticmethod
    def parse_log_level(level: str) -> LogLevel:
        """
        Convert a string to a LogLevel enum.

        :raises ValueError: If the string is not a valid log level.
        """
        try:
            return LogLevel(str(level).upper())
        except ValueError:
            raise ValueError(f"Invalid log level: {level}")

    @staticmethod
    def parse_system_kind(value: str, field_name: str = "system") -> SystemKind:
        """Convert a string to a SystemKind enum."""
        try:
            return SystemKind(str(value).strip().lower())
        except ValueError:
            options = ", ".join(kind.value for kind in SystemKind)
            raise ValueError(f"{field_name} must be one of {options}, got {value!r}")

    @staticmethod
    def parse_blowup_policy(value: str, field_name: str = "blowup_policy") -> BlowUpPolicy:
        """Convert a string to a BlowUpPolicy enum."""
        try:
            return BlowUpPolicy(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"{field_name} must be 'abort' or 'drop', got {value!r}")

    @staticmethod
    def validate_directory_path(path: str, create_if_missing: bool = False) -> str:
        """
        Validate or create a directory path.

        :param path: Directory path to validate.
        :param create_if_missing: Create directory if it does not exist.
        :returns: Normalized directory path.
        :raises ValueError: If the path exists but is not a directory.
        """
        path_obj = Path(path).expanduser()
        if path_obj.exists() and not path_obj.is_dir():
            raise ValueError(f"Not a directory: {path}")
        if create_if_missing and not path_obj.exists():
            path_obj.mkdir(parents=True, exist_ok=True)
        return str(path_obj)
