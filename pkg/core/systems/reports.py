from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd

# Margins within SLACK_FACTOR * rel_tol * max(1, |bound|) count as integrator noise.
SLACK_FACTOR = 10.0

BOUND_COLUMNS = [
    "name",
    "held",
    "samples",
    "violations",
    "tight",
    "min_margin",
    "observed_max",
    "bound_value",
    "first_violation_time",
]


@dataclass(slots=True)
class BoundCheck:
    """
    Outcome of comparing an observed quantity against an a priori bound
    along a sampled trajectory.

    ``violations`` counts samples where the observation exceeds the bound by
    more than the integrator slack, ``tight`` counts samples where the two
    agree to within that slack.
    """

    name: str
    held: bool
    samples: int
    violations: int
    tight: int
    min_margin: float
    observed_max: float
    bound_value: float
    first_violation_time: float | None = None

    @classmethod
    def evaluate(
        cls,
        name: str,
        times: np.ndarray,
        observed: np.ndarray,
        bound: np.ndarray | float,
        rel_tol: float,
        slack_factor: float = SLACK_FACTOR,
    ) -> BoundCheck:
        """Compare ``observed <= bound`` sample by sample."""
        times = np.asarray(times, dtype=np.float64)
        observed = np.asarray(observed, dtype=np.float64)
        bound = np.broadcast_to(np.asarray(bound, dtype=np.float64), observed.shape)
        if observed.size == 0:
            raise ValueError(f"{name}: no samples to check")

        with np.errstate(invalid="ignore", over="ignore"):
            margin = bound - observed
            slack = slack_factor * rel_tol * np.maximum(1.0, np.abs(np.where(np.isfinite(bound), bound, 0.0)))
        margin = np.where(np.isnan(margin), -np.inf, margin)

        violated = margin < -slack
        tight = np.abs(margin) <= slack
        worst = int(np.argmin(margin))
        first = float(times[np.argmax(violated)]) if violated.any() else None
        return cls(
            name=name,
            held=not bool(violated.any()),
            samples=int(observed.size),
            violations=int(violated.sum()),
            tight=int(tight.sum()),
            min_margin=float(margin[worst]),
            observed_max=float(np.max(observed)),
            bound_value=float(bound[worst]),
            first_violation_time=first,
        )

    def renamed(self, name: str) -> BoundCheck:
        return BoundCheck(
            name,
            self.held,
            self.samples,
            self.violations,
            self.tight,
            self.min_margin,
            self.observed_max,
            self.bound_value,
            self.first_violation_time,
        )

    def to_dict(self) -> dict[str, Any]:
        return {column: getattr(self, column) for column in BOUND_COLUMNS}


@dataclass(slots=True)
class BoundReport:
    """Evaluated bound constants plus the checks run against them."""

    constants: dict[str, float] = field(default_factory=dict)
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def held(self) -> bool:
        return all(check.held for check in self.checks)

    @property
    def violations(self) -> int:
        return sum(check.violations for check in self.checks)

    def check(self, name: str) -> BoundCheck:
        for entry in self.checks:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def extend(self, other: BoundReport, prefix: str = "") -> BoundReport:
        """Append another report's checks (and constants) under an optional name prefix."""
        for entry in other.checks:
            self.checks.append(entry.renamed(f"{prefix}{entry.name}") if prefix else entry)
        for key, value in other.constants.items():
            self.constants[f"{prefix}{key}"] = value
        return self

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([entry.to_dict() for entry in self.checks], columns=BOUND_COLUMNS)
