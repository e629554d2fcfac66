from __future__ import annotations

import numpy as np

from core.process.process import IntegratorConfig, ProcessDef
from core.systems.forcing import ForcingR

SINE_FORCING = ForcingR.sinusoids([(1.0, 1.0, 0.0)])


def linear_benchmark_field(rate: float, g, t: float, x: np.ndarray) -> np.ndarray:
    """x' = -rate * x + g(t)."""
    if not rate > 0.0:
        raise ValueError(f"decay rate must be positive, got {rate!r}")
    return -rate * np.asarray(x, dtype=np.float64) + g(t)


def linear_particular_solution(rate: float, t):
    """Bounded solution of x' = -rate x + sin t: (rate sin t - cos t) / (1 + rate^2)."""
    return (rate * np.sin(t) - np.cos(t)) / (1.0 + rate * rate)


def linear_range_radius(rate: float) -> float:
    """Amplitude of the bounded solution: its range is [-1/sqrt(1+rate^2), 1/sqrt(1+rate^2)]."""
    return float(1.0 / np.sqrt(1.0 + rate * rate))


def linear_process(
    forcing: ForcingR = SINE_FORCING, integrator: IntegratorConfig = IntegratorConfig(), guard_radius: float = 1e6
) -> ProcessDef:
    """Scalar process x' = -rate x + g(t); parameter ``rate``."""

    def field(t, x, lam):
        return -lam["rate"] * x + forcing.r_fn(t)

    return ProcessDef(1, field, guard_radius, integrator, "linear_benchmark")


def pitchfork_field(mu: float, eps: float, t: float, x: np.ndarray) -> np.ndarray:
    """x' = mu x - x^3 + eps sin t."""
    x = np.asarray(x, dtype=np.float64)
    return mu * x - x * x * x + eps * np.sin(t)


def pitchfork_equilibria(mu: float) -> np.ndarray:
    """Equilibria of the unforced pitchfork: {0} for mu <= 0, {-sqrt(mu), 0, sqrt(mu)} otherwise."""
    if mu <= 0.0:
        return np.array([0.0])
    root = float(np.sqrt(mu))
    return np.array([-root, 0.0, root])


def pitchfork_process(integrator: IntegratorConfig = IntegratorConfig(), guard_radius: float = 1e6) -> ProcessDef:
    """Scalar pitchfork process; parameters ``mu`` and optional ``eps`` (default 0)."""

    def field(t, x, lam):
        return pitchfork_field(lam["mu"], lam.get("eps", 0.0), t, x)

    return ProcessDef(1, field, guard_radius, integrator, "pitchfork_benchmark")
