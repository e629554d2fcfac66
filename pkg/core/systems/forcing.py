from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

ScalarFn = Callable[[float | np.ndarray], float | np.ndarray]


@dataclass(frozen=True, slots=True)
class SinusoidTerm:
    """One term ``amplitude * sin(frequency * t + phase)``."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def to_dict(self) -> dict[str, float]:
        return {"amplitude": self.amplitude, "frequency": self.frequency, "phase": self.phase}


@dataclass(frozen=True, slots=True)
class ForcingR:
    """
    Bounded C^1 scalar forcing r(t) with derivative r'(t).

    ``R0`` bounds both |r| and |r'| for all t. The sinusoid constructor
    computes it as |offset| + sum(|a| * max(1, |w|)), which is never smaller
    than the true bound.
    """

    r_fn: ScalarFn
    r_prime_fn: ScalarFn
    R0: float
    terms: tuple[SinusoidTerm, ...] = ()
    offset: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.R0) or self.R0 < 0.0:
            raise ValueError(f"forcing.R0 must be a non-negative finite number, got {self.R0!r}")

    @classmethod
    def sinusoids(
        cls,
        terms: Iterable[SinusoidTerm | tuple[float, float, float] | tuple[float, float]],
        offset: float = 0.0,
        R0: float | None = None,
    ) -> ForcingR:
        """Build r(t) = offset + sum(a * sin(w t + phi)); ``R0`` overrides the computed bound."""
        normalized = tuple(term if isinstance(term, SinusoidTerm) else SinusoidTerm(*map(float, term)) for term in terms)
        offset = float(offset)
        amplitudes = np.array([term.amplitude for term in normalized], dtype=np.float64)
        frequencies = np.array([term.frequency for term in normalized], dtype=np.float64)
        phases = np.array([term.phase for term in normalized], dtype=np.float64)

        def r_fn(t):
            t = np.asarray(t, dtype=np.float64)
            return offset + np.sum(amplitudes * np.sin(np.multiply.outer(t, frequencies) + phases), axis=-1)

        def r_prime_fn(t):
            t = np.asarray(t, dtype=np.float64)
            return np.sum(amplitudes * frequencies * np.cos(np.multiply.outer(t, frequencies) + phases), axis=-1)

        bound = abs(offset) + float(np.sum(np.abs(amplitudes) * np.maximum(1.0, np.abs(frequencies))))
        return cls(r_fn, r_prime_fn, bound if R0 is None else float(R0), normalized, offset)

    @classmethod
    def constant(cls, value: float) -> ForcingR:
        return cls.sinusoids((), offset=value)

    def check_on_grid(self, t_start: float, t_end: float, step: float = 0.01) -> bool:
        """True when |r| and |r'| stay within R0 on a uniform grid over [t_start, t_end]."""
        if t_end < t_start or step <= 0.0:
            raise ValueError("check_on_grid needs t_end >= t_start and step > 0")
        grid = np.linspace(t_start, t_end, int(np.ceil((t_end - t_start) / step)) + 1)
        slack = 1e-12 * max(1.0, self.R0)
        r_max = float(np.max(np.abs(self.r_fn(grid))))
        rp_max = float(np.max(np.abs(self.r_prime_fn(grid))))
        return r_max <= self.R0 + slack and rp_max <= self.R0 + slack

    def frequencies(self) -> tuple[float, ...]:
        return tuple(term.frequency for term in self.terms if term.amplitude != 0.0)

    def common_period(self, max_ratio_denominator: int = 64) -> float | None:
        """
        Smallest common period of the sinusoid terms, None for constant forcing.

        Returns ``inf`` when the frequencies are not rationally related with a
        denominator up to ``max_ratio_denominator`` (quasi-periodic forcing).
        """
        active = [abs(w) for w in self.frequencies() if w != 0.0]
        if not active:
            return None
        base = active[0]
        denominators = []
        for w in active:
            ratio = w / base
            best = min(range(1, max_ratio_denominator + 1), key=lambda q: abs(ratio * q - round(ratio * q)))
            if abs(ratio * best - round(ratio * best)) > 1e-9 * best:
                return float("inf")
            denominators.append(best)
        lcm = int(np.lcm.reduce(denominators))
        return float(2.0 * np.pi * lcm / base)

    def to_dict(self) -> dict:
        return {"offset": self.offset, "R0": self.R0, "terms": [term.to_dict() for term in self.terms]}
