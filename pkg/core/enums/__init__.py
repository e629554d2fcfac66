from .blowup_policy import BlowUpPolicy
from .exit_code import ExitCode
from .log_level import LogLevel
from .system_kind import SystemKind

__all__ = ["BlowUpPolicy", "ExitCode", "LogLevel", "SystemKind"]
