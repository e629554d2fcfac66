from enum import Enum


class BlowUpPolicy(Enum):
    """What set evolution does when a point leaves the guard ball."""
    ABORT = "abort"
    DROP = "drop"
