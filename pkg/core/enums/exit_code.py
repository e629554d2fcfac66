from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit status of a CLI command."""
    SUCCESS = 0
    ERROR = 1
    NOT_CONVERGED = 2
