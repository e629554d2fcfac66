from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from core.geometry.point_cloud import PointCloud
from core.process.process import ParameterPoint

DEFAULT_T0 = 5.0
DEFAULT_DEPTH = 6
DEFAULT_CONSECUTIVE = 2


@dataclass(slots=True)
class PullbackError(Exception):
    """Raised when a pullback iterate cannot be computed."""

    code: str
    lam: ParameterPoint
    s: float
    details: str = ""

    def __str__(self) -> str:
        base = f"{self.code} at [{self.lam.label()}] from s={self.s:g}"
        return f"{base}: {self.details}" if self.details else base


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


@dataclass(frozen=True, slots=True)
class PullbackSchedule:
    """Decreasing start times for the s -> -inf limit and its stopping rule."""

    s_list: tuple[float, ...]
    tol: float
    consecutive_required: int = DEFAULT_CONSECUTIVE

    def __post_init__(self):
        s_list = tuple(float(s) for s in self.s_list)
        if not s_list:
            raise ValueError("a pullback schedule needs at least one start time")
        if any(later >= earlier for earlier, later in zip(s_list, s_list[1:])):
            raise ValueError("schedule start times must be strictly decreasing")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if int(self.consecutive_required) <= 0:
            raise ValueError("consecutive_required must be positive")
        object.__setattr__(self, "s_list", s_list)

    @classmethod
    def geometric(
        cls,
        t: float,
        tol: float,
        T0: float = DEFAULT_T0,
        depth: int = DEFAULT_DEPTH,
        consecutive_required: int = DEFAULT_CONSECUTIVE,
    ) -> PullbackSchedule:
        """s_k = t - T0 * 2^k for k = 0 .. depth - 1."""
        if not T0 > 0.0 or depth <= 0:
            raise ValueError("T0 and depth must be positive")
        return cls(tuple(t - T0 * 2.0**k for k in range(depth)), tol, consecutive_required)

    def to_dict(self) -> dict[str, Any]:
        return {"s_list": list(self.s_list), "tol": self.tol, "consecutive_required": self.consecutive_required}


@dataclass(slots=True)
class AttractorSection:
    """
    Approximation of A_lam(t).

    ``history`` holds (s, distance to the previous iterate); its first entry
    has distance inf. ``to_final`` holds the distance of every iterate to the
    returned cloud.
    """

    t: float
    lam: ParameterPoint
    cloud: PointCloud
    s_converged: float
    history: list[tuple[float, float]] = field(default_factory=list)
    converged: bool = False
    to_final: list[float] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "lambda": self.lam.to_dict(),
            "s_converged": self.s_converged,
            "converged": self.converged,
            "history": [{"s": s, "delta": _finite_or_none(delta)} for s, delta in self.history],
            "to_final": list(self.to_final),
            "points": len(self.cloud),
            "resolution": self.cloud.resolution,
        }


@dataclass(slots=True)
class UniformAttractorApprox:
    """Windowed union over start times, doubled until successive unions agree."""

    lam: ParameterPoint
    cloud: PointCloud
    t_window: float
    s_grid: tuple[float, ...]
    history: list[tuple[float, float]] = field(default_factory=list)
    converged: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam.to_dict(),
            "t_window": self.t_window,
            "s_grid": list(self.s_grid),
            "converged": self.converged,
            "history": [{"t": t, "delta": _finite_or_none(delta)} for t, delta in self.history],
            "points": len(self.cloud),
            "resolution": self.cloud.resolution,
        }


@dataclass(slots=True)
class ContainmentReport:
    """rho(section, uniform cloud) per section time."""

    rows: list[tuple[float, float]] = field(default_factory=list)

    @property
    def max_distance(self) -> float:
        return max((distance for _, distance in self.rows), default=0.0)

    def within(self, tol: float) -> bool:
        return self.max_distance <= tol
