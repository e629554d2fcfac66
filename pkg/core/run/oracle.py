"""Closed-form benchmark checks behind the ``oracle`` command."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.attractors.models import PullbackSchedule
from core.attractors.pullback import invariance_residual, pullback_section
from core.attractors.sampling import sample_interval
from core.attractors.uniform import period_multiple, s_grid_for_period, uniform_attractor
from core.continuity.diagnostics import check_monotone_convergence, section_monotone_history
from core.geometry.point_cloud import PointCloud, hausdorff, semi_distance
from core.process.process import IntegratorConfig, ParameterPoint
from core.systems.benchmarks import (
    SINE_FORCING,
    linear_particular_solution,
    linear_process,
    linear_range_radius,
    pitchfork_equilibria,
    pitchfork_process,
)
from core.util.logger import Logger

ORACLE_COLUMNS = ["name", "expected", "measured", "error", "tolerance", "passed"]
ORACLE_TOL = 1e-7
ORACLE_SEED_POINTS = 65
UNIFORM_S_POINTS = 32
DISTANCE_PAIRS = 20


@dataclass(frozen=True, slots=True)
class OracleCase:
    name: str
    expected: float
    measured: float
    tolerance: float

    @property
    def error(self) -> float:
        return abs(self.measured - self.expected)

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance

    def to_row(self) -> list:
        return [self.name, self.expected, self.measured, self.error, self.tolerance, self.passed]


def oracle_frame(cases: list[OracleCase]) -> pd.DataFrame:
    return pd.DataFrame([case.to_row() for case in cases], columns=ORACLE_COLUMNS)


def _distance_methods_agree(seed: int) -> OracleCase:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(DISTANCE_PAIRS):
        dim = int(rng.integers(1, 4))
        a = PointCloud(rng.normal(size=(int(rng.integers(1, 300)), dim)))
        c = PointCloud(rng.normal(size=(int(rng.integers(1, 300)), dim)))
        brute = hausdorff(a, c, method="brute")
        tree = hausdorff(a, c, method="kdtree")
        worst = max(worst, abs(brute.forward - tree.forward), abs(brute.backward - tree.backward))
    return OracleCase("hausdorff_kdtree_matches_brute", 0.0, worst, 0.0)


def run_oracle(
    integrator: IntegratorConfig = IntegratorConfig(), seed: int = 0, threads: int = 1, tol: float = ORACLE_TOL
) -> list[OracleCase]:
    """
    Every benchmark with a known answer, compared against that answer.

    ``tol`` is the pullback convergence tolerance; the pullback cases accept
    ten times it and the invariance case five times it.
    """
    if not tol > 0.0:
        raise ValueError(f"oracle tolerance must be positive, got {tol!r}")
    cases = [_distance_methods_agree(seed)]
    seeds = sample_interval(-2.0, 2.0, ORACLE_SEED_POINTS)
    linear = linear_process(SINE_FORCING, integrator)

    sections = {}
    for rate in (1.0, 2.0):
        lam = ParameterPoint.of(rate=rate)
        schedule = PullbackSchedule.geometric(0.0, tol, depth=5)
        section = pullback_section(linear, lam, 0.0, seeds, schedule, threads=threads)
        sections[rate] = section
        expected = float(linear_particular_solution(rate, 0.0))
        measured = hausdorff(section.cloud, PointCloud.singleton([expected])).symmetric
        cases.append(OracleCase(f"linear_pullback_rate_{rate:g}", 0.0, measured, 10.0 * tol))

    lam = ParameterPoint.of(rate=1.0)
    later = pullback_section(linear, lam, 1.0, seeds, PullbackSchedule.geometric(1.0, tol, depth=5), threads=threads)
    residual = invariance_residual(linear, lam, sections[1.0], later)
    cases.append(OracleCase("linear_invariance_residual", 0.0, residual, 5.0 * tol))

    history = section_monotone_history(sections[1.0])
    monotone = check_monotone_convergence(history, tol / 4.0)
    cases.append(OracleCase("linear_pullback_monotone", 1.0, float(monotone.monotone), 0.0))

    period = 2.0 * math.pi
    s_grid = s_grid_for_period(period, UNIFORM_S_POINTS)
    spacing = period / UNIFORM_S_POINTS
    uniform = uniform_attractor(
        linear, lam, seeds, period_multiple(10.0, period), s_grid, 1e-4, 1e-3, threads=threads
    )
    radius = linear_range_radius(1.0)
    interval = sample_interval(-radius, radius, 2049)
    cases.append(OracleCase("linear_uniform_range", 0.0, hausdorff(uniform.cloud, interval).symmetric, 2.0 * spacing))
    cases.append(
        OracleCase("linear_uniform_inside_range", 0.0, semi_distance(uniform.cloud, interval), radius / 2048 + 1e-6)
    )

    pitchfork = pitchfork_process(integrator)
    mu_lam = ParameterPoint.of(mu=1.0)
    section = pullback_section(
        pitchfork, mu_lam, 0.0, seeds, PullbackSchedule.geometric(0.0, tol, depth=5), threads=threads
    )
    equilibria = PointCloud(pitchfork_equilibria(1.0).reshape(-1, 1))
    measured = hausdorff(section.cloud, equilibria).symmetric
    cases.append(OracleCase("pitchfork_equilibria_mu_1", 0.0, measured, 10.0 * tol))

    for case in cases:
        Logger.info(f"Oracle {case.name}: {'pass' if case.passed else 'FAIL'} (error {case.error:.3e})")
    return cases
