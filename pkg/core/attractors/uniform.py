from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from core.attractors.models import AttractorSection, ContainmentReport, UniformAttractorApprox
from core.enums.blowup_policy import BlowUpPolicy
from core.geometry.point_cloud import PointCloud, hausdorff, merge_dedup, semi_distance
from core.process.process import DEFAULT_BATCH_SIZE, ParameterPoint, ProcessDef, evolve_cloud
from core.util.logger import Logger

DEFAULT_MAX_DOUBLINGS = 6


def s_grid_for_period(period: float | None, n_points: int, window: float | None = None) -> tuple[float, ...]:
    """
    Start times covering one forcing period.

    ``None`` (autonomous) gives the single start time 0. An infinite period
    (incommensurate frequencies) has no finite cover; ``window`` is then
    sampled instead and a warning is logged.
    """
    if n_points <= 0:
        raise ValueError("n_points must be positive")
    if period is None:
        return (0.0,)
    if math.isinf(period):
        if window is None or not window > 0.0:
            raise ValueError("quasi-periodic forcing needs an explicit positive s window")
        Logger.warning(
            f"forcing frequencies are incommensurate; sampling s over [0, {window:g}) with {n_points} points only"
        )
        span = window
    else:
        span = period
    return tuple(float(s) for s in np.linspace(0.0, span, n_points, endpoint=False))


def period_multiple(t_window: float, period: float | None) -> float:
    """Smallest multiple of a finite period that is >= t_window."""
    if period is None or math.isinf(period):
        return float(t_window)
    return float(period * max(1, math.ceil(t_window / period - 1e-12)))


def uniform_attractor(
    proc: ProcessDef,
    lam: ParameterPoint,
    K: PointCloud,
    t_window: float,
    s_grid: Sequence[float],
    merge_radius: float,
    tol: float,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    policy: BlowUpPolicy = BlowUpPolicy.ABORT,
) -> UniformAttractorApprox:
    """
    Union over s in ``s_grid`` of S_lam(s + t_window, s) K, merged, with the
    window doubled until two successive unions are within ``tol``.

    After ``max_doublings`` doublings the last union is returned with
    ``converged = False``. Under periodic forcing ``t_window`` should be a
    multiple of the period (see ``period_multiple``), otherwise successive
    unions sample different phases of the attractor.
    """
    if not t_window > 0.0:
        raise ValueError(f"t_window must be positive, got {t_window!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if merge_radius < 0.0:
        raise ValueError(f"merge_radius must be non-negative, got {merge_radius!r}")
    if max_doublings < 0:
        raise ValueError("max_doublings must be non-negative")
    grid = tuple(sorted({float(s) for s in s_grid}))
    if not grid:
        raise ValueError("s_grid must not be empty")

    window = float(t_window)
    history: list[tuple[float, float]] = []
    previous: PointCloud | None = None
    converged = False
    for attempt in range(max_doublings + 1):
        images = [
            evolve_cloud(proc, lam, s, s + window, K, merge_radius, batch_size=batch_size, threads=threads, policy=policy)
            for s in grid
        ]
        cloud = merge_dedup(PointCloud.union(*images), merge_radius)
        delta = float("inf") if previous is None else hausdorff(cloud, previous).symmetric
        history.append((window, delta))
        Logger.info(f"{proc.name} [{lam.label()}] window={window:g}: {len(cloud)} points, delta={delta:.3e}")
        if delta <= tol:
            converged = True
            break
        previous = cloud
        if attempt < max_doublings:
            window *= 2.0

    if not converged:
        Logger.warning(f"{proc.name} [{lam.label()}]: window doubling budget exhausted at {window:g}")
    return UniformAttractorApprox(lam, cloud, window, grid, history, converged)


def containment_check(uniform: UniformAttractorApprox, sections: Iterable[AttractorSection]) -> ContainmentReport:
    """rho(A_lam(t), uniform cloud) for each section; all should be small."""
    report = ContainmentReport()
    for section in sections:
        if section.lam != uniform.lam:
            raise ValueError(f"section at t={section.t} belongs to [{section.lam.label()}], not [{uniform.lam.label()}]")
        report.rows.append((section.t, semi_distance(section.cloud, uniform.cloud)))
    return report
