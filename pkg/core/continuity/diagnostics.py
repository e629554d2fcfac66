from __future__ import annotations

from typing import Iterable

from core.attractors.models import AttractorSection
from core.continuity.models import MonotoneCheck


def check_monotone_convergence(history: Iterable[tuple[int, float]], merge_radius: float = 0.0) -> MonotoneCheck:
    """
    True when the distances in ``history`` (pairs of (index, distance to the
    limit)) never increase by more than 2 * merge_radius from one entry to
    the next. Otherwise the index of the first up-tick is reported.
    """
    if merge_radius < 0.0:
        raise ValueError(f"merge_radius must be non-negative, got {merge_radius!r}")
    slack = 2.0 * merge_radius
    previous: float | None = None
    for index, distance in history:
        if previous is not None and distance > previous + slack:
            return MonotoneCheck(False, index)
        previous = distance
    return MonotoneCheck(True)


def section_monotone_history(section: AttractorSection) -> list[tuple[int, float]]:
    """(iterate index, distance to the returned cloud) along a pullback schedule."""
    return list(enumerate(section.to_final))
