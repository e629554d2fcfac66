from __future__ import annotations

from typing import Iterable, Sequence

from core.attractors.models import PullbackError, PullbackSchedule
from core.attractors.pullback import SeedSet, pullback_section
from core.attractors.uniform import DEFAULT_MAX_DOUBLINGS, uniform_attractor
from core.continuity.models import ParameterGrid, SweepError, SweepResult
from core.enums.blowup_policy import BlowUpPolicy
from core.geometry.point_cloud import DistancePair, PointCloud, hausdorff
from core.process.process import DEFAULT_BATCH_SIZE, IntegrationError, ParameterPoint, ProcessDef
from core.util.logger import Logger


def _fill_pairs(result: SweepResult, full_matrix: bool):
    pairs = result.grid.all_pairs() if full_matrix else result.grid.adjacent_pairs()
    for i, j in pairs:
        if i in result.sections and j in result.sections:
            result.pairwise[(i, j)] = hausdorff(result.cloud(i), result.cloud(j))


def _finish(result: SweepResult, full_matrix: bool) -> SweepResult:
    if not result.sections:
        raise SweepError("all_failed", f"every one of {result.grid.size} grid points failed")
    _fill_pairs(result, full_matrix)
    return result


def sweep_pullback(
    proc: ProcessDef,
    grid: ParameterGrid,
    t: float,
    seed_set: SeedSet,
    schedule: PullbackSchedule,
    merge_radius: float | None = None,
    *,
    full_matrix: bool = False,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    policy: BlowUpPolicy = BlowUpPolicy.ABORT,
) -> SweepResult:
    """
    Pullback sections at every grid point with a shared seed set and schedule.

    A failing grid point is recorded in ``failures`` and the sweep goes on.

    :raises SweepError: when no grid point succeeded.
    """
    result = SweepResult(grid=grid, t=t)
    for index, lam in enumerate(grid.points):
        Logger.info(f"Sweep point {index + 1}/{grid.size}: [{lam.label()}]")
        try:
            result.sections[index] = pullback_section(
                proc, lam, t, seed_set, schedule, merge_radius, batch_size=batch_size, threads=threads, policy=policy
            )
        except (PullbackError, IntegrationError) as exc:
            Logger.warning(f"Sweep point [{lam.label()}] failed: {exc}")
            result.failures[index] = str(exc)
    return _finish(result, full_matrix)


def sweep_uniform(
    proc: ProcessDef,
    grid: ParameterGrid,
    K: PointCloud,
    t_window: float,
    s_grid: Sequence[float],
    merge_radius: float,
    tol: float,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    *,
    full_matrix: bool = False,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    policy: BlowUpPolicy = BlowUpPolicy.ABORT,
) -> SweepResult:
    """Uniform attractor approximations at every grid point; failures are recorded as in ``sweep_pullback``."""
    result = SweepResult(grid=grid, t=None)
    for index, lam in enumerate(grid.points):
        Logger.info(f"Uniform sweep point {index + 1}/{grid.size}: [{lam.label()}]")
        try:
            result.sections[index] = uniform_attractor(
                proc,
                lam,
                K,
                t_window,
                s_grid,
                merge_radius,
                tol,
                max_doublings,
                batch_size=batch_size,
                threads=threads,
                policy=policy,
            )
        except IntegrationError as exc:
            Logger.warning(f"Uniform sweep point [{lam.label()}] failed: {exc}")
            result.failures[index] = str(exc)
    return _finish(result, full_matrix)


def continuity_modulus(
    sweep: SweepResult, lam0: ParameterPoint, deltas: Iterable[float] | None = None
) -> list[tuple[float, float]]:
    """
    (delta, sup Delta(A_lam, A_lam0) over computed grid points with
    |lam - lam0| <= delta). Radii default to the distinct grid distances
    from lam0, 0 included; the table is non-decreasing in delta.
    """
    anchor = sweep.require(lam0)
    points = sweep.grid.points
    neighbours = [
        (lam0.distance(points[index]), hausdorff(sweep.cloud(index), sweep.cloud(anchor)).symmetric)
        for index in sorted(sweep.sections)
    ]
    radii = sorted({d for d, _ in neighbours}) if deltas is None else sorted(float(d) for d in deltas)
    if any(radius < 0.0 for radius in radii):
        raise ValueError("modulus radii must be non-negative")
    # Grid distances are recomputed in floating point; compare with a relative margin.
    return [
        (radius, max(delta for d, delta in neighbours if d <= radius * (1.0 + 1e-12) + 1e-15)) for radius in radii
    ]


def semicontinuity_split(sweep: SweepResult, lam0: ParameterPoint) -> list[tuple[ParameterPoint, DistancePair]]:
    """
    For each computed grid point: forward = rho(A_lam, A_lam0) (upper
    semicontinuity, no explosion) and backward = rho(A_lam0, A_lam)
    (lower semicontinuity, no implosion).
    """
    anchor = sweep.require(lam0)
    points = sweep.grid.points
    return [(points[index], hausdorff(sweep.cloud(index), sweep.cloud(anchor))) for index in sorted(sweep.sections)]
