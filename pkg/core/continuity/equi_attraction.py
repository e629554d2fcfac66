from __future__ import annotations

from typing import Mapping, Sequence

from core.attractors.models import AttractorSection, UniformAttractorApprox
from core.attractors.pullback import SeedSet, seed_at
from core.continuity.models import EquiAttractionError, EquiAttractionReport, ParameterGrid
from core.geometry.point_cloud import PointCloud, semi_distance
from core.process.process import DEFAULT_BATCH_SIZE, ProcessDef, evolve_cloud
from core.util.logger import Logger


def _require_all(grid: ParameterGrid, approximations: Mapping[int, AttractorSection | UniformAttractorApprox]):
    points = grid.points
    for index in range(grid.size):
        approx = approximations.get(index)
        if approx is None:
            raise EquiAttractionError("missing_section", f"no attractor approximation for [{points[index].label()}]")
        if not approx.converged:
            raise EquiAttractionError("not_converged", f"approximation at [{points[index].label()}] did not converge")


def _record(report: EquiAttractionReport, grid: ParameterGrid, value: float, distances: list[float]):
    worst = max(range(len(distances)), key=lambda index: distances[index])
    report.values.append(value)
    report.rates.append(distances[worst])
    report.argmax.append(grid.points[worst])
    report.per_lambda.extend((value, index, distance) for index, distance in enumerate(distances))


def equi_attraction_rate(
    proc: ProcessDef,
    grid: ParameterGrid,
    t: float,
    seed_set: SeedSet,
    s_values: Sequence[float],
    sections: Mapping[int, AttractorSection],
    merge_radius: float = 0.0,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
) -> EquiAttractionReport:
    """
    For each start time s (processed from the latest to the earliest):
    sup over the grid of rho(S_lam(t, s) D, A_lam(t)). The sup runs over the
    finite grid only.

    :raises EquiAttractionError: when a grid point has no converged section.
    """
    _require_all(grid, sections)
    if not s_values:
        raise ValueError("s_values must not be empty")
    if any(s > t for s in s_values):
        raise ValueError(f"every start time must satisfy s <= t = {t}")

    report = EquiAttractionReport(t=t, variable="s", axis_names=grid.axis_names)
    points = grid.points
    for s in sorted({float(v) for v in s_values}, reverse=True):
        seed = seed_at(seed_set, s)
        distances = [
            semi_distance(
                evolve_cloud(proc, lam, s, t, seed, merge_radius, batch_size=batch_size, threads=threads),
                sections[index].cloud,
            )
            for index, lam in enumerate(points)
        ]
        _record(report, grid, s, distances)
        Logger.info(f"Equi-attraction s={s:g}: sup rate {report.rates[-1]:.3e}")
    return report


def uniform_equi_attraction_rate(
    proc: ProcessDef,
    grid: ParameterGrid,
    K: PointCloud,
    t_values: Sequence[float],
    s_grid: Sequence[float],
    uniforms: Mapping[int, UniformAttractorApprox],
    merge_radius: float = 0.0,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
) -> EquiAttractionReport:
    """
    For each elapsed time t (increasing): sup over the grid and over
    s in ``s_grid`` of rho(S_lam(t + s, s) K, uniform attractor of lam).
    """
    _require_all(grid, uniforms)
    if not t_values or not s_grid:
        raise ValueError("t_values and s_grid must not be empty")
    if any(t < 0.0 for t in t_values):
        raise ValueError("elapsed times must be non-negative")

    report = EquiAttractionReport(t=None, variable="t", axis_names=grid.axis_names)
    points = grid.points
    starts = sorted({float(s) for s in s_grid})
    for t in sorted({float(v) for v in t_values}):
        distances = []
        for index, lam in enumerate(points):
            target = uniforms[index].cloud
            distances.append(
                max(
                    semi_distance(
                        evolve_cloud(proc, lam, s, s + t, K, merge_radius, batch_size=batch_size, threads=threads),
                        target,
                    )
                    for s in starts
                )
            )
        _record(report, grid, t, distances)
        Logger.info(f"Uniform equi-attraction t={t:g}: sup rate {report.rates[-1]:.3e}")
    return report
