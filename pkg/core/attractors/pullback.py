from __future__ import annotations

from typing import Callable, Union

from core.attractors.models import AttractorSection, PullbackError, PullbackSchedule
from core.enums.blowup_policy import BlowUpPolicy
from core.geometry.point_cloud import PointCloud, hausdorff
from core.process.process import (
    DEFAULT_BATCH_SIZE,
    IntegrationError,
    ParameterPoint,
    ProcessDef,
    evolve_cloud,
)
from core.util.logger import Logger

SeedSet = Union[PointCloud, Callable[[float], PointCloud]]


def seed_at(seed_set: SeedSet, s: float) -> PointCloud:
    """The absorbing set used when starting at time ``s``."""
    return seed_set if isinstance(seed_set, PointCloud) else seed_set(s)


def pullback_section(
    proc: ProcessDef,
    lam: ParameterPoint,
    t: float,
    seed_set: SeedSet,
    schedule: PullbackSchedule,
    merge_radius: float | None = None,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    policy: BlowUpPolicy = BlowUpPolicy.ABORT,
) -> AttractorSection:
    """
    Evolve the seed set from each start time of ``schedule`` to ``t`` and stop
    once ``consecutive_required`` successive iterates are within ``tol``.

    An exhausted schedule is not an error: the last iterate is returned with
    ``converged = False`` and the full history.

    :raises PullbackError: when an iterate blows up or the integrator fails.
    """
    if any(s > t for s in schedule.s_list):
        raise ValueError(f"every start time must satisfy s <= t = {t}")
    radius = schedule.tol / 4.0 if merge_radius is None else merge_radius
    if radius < 0.0:
        raise ValueError(f"merge_radius must be non-negative, got {radius!r}")

    iterates: list[PointCloud] = []
    history: list[tuple[float, float]] = []
    streak = 0
    converged = False
    for s in schedule.s_list:
        try:
            cloud = evolve_cloud(
                proc, lam, s, t, seed_at(seed_set, s), radius, batch_size=batch_size, threads=threads, policy=policy
            )
        except IntegrationError as exc:
            raise PullbackError("blow_up", lam, s, str(exc)) from exc

        delta = float("inf") if not iterates else hausdorff(cloud, iterates[-1]).symmetric
        history.append((s, delta))
        iterates.append(cloud)
        streak = streak + 1 if delta <= schedule.tol else 0
        Logger.info(f"{proc.name} [{lam.label()}] t={t:g} s={s:g}: {len(cloud)} points, delta={delta:.3e}")
        if streak >= schedule.consecutive_required:
            converged = True
            break

    final = iterates[-1]
    if not converged:
        Logger.warning(f"{proc.name} [{lam.label()}] t={t:g}: schedule exhausted without convergence")
    return AttractorSection(
        t=t,
        lam=lam,
        cloud=final,
        s_converged=history[-1][0],
        history=history,
        converged=converged,
        to_final=[hausdorff(iterate, final).symmetric for iterate in iterates],
    )


def interpolate_section(
    proc: ProcessDef,
    lam: ParameterPoint,
    section: AttractorSection,
    t: float,
    merge_radius: float = 0.0,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
) -> AttractorSection:
    """A_lam(t) = S_lam(t, n) A_lam(n) for a converged section at time n <= t."""
    if not section.converged:
        raise ValueError("only converged sections can be interpolated")
    if t < section.t:
        raise ValueError(f"interpolation needs t >= section time {section.t}, got {t}")
    cloud = evolve_cloud(proc, lam, section.t, t, section.cloud, merge_radius, batch_size=batch_size, threads=threads)
    return AttractorSection(
        t=t,
        lam=lam,
        cloud=cloud,
        s_converged=section.s_converged,
        history=list(section.history),
        converged=True,
        to_final=list(section.to_final),
    )


def invariance_residual(
    proc: ProcessDef,
    lam: ParameterPoint,
    first: AttractorSection,
    second: AttractorSection,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
) -> float:
    """Delta(S_lam(t2, t1) A(t1), A(t2)) for converged sections with t1 <= t2."""
    if not (first.converged and second.converged):
        raise ValueError("invariance residual needs converged sections")
    if second.t < first.t:
        raise ValueError(f"sections must satisfy t1 <= t2, got t1={first.t}, t2={second.t}")
    image = evolve_cloud(proc, lam, first.t, second.t, first.cloud, batch_size=batch_size, threads=threads)
    return hausdorff(image, second.cloud).symmetric
