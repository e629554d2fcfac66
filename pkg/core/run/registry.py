"""Maps a run configuration to its process, seed sets and forcing period."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from core.attractors.pullback import SeedSet
from core.attractors.sampling import sample_ball, sample_interval
from core.enums.system_kind import SystemKind
from core.geometry.point_cloud import PointCloud
from core.process.process import ParameterPoint, ProcessDef
from core.run.run_config import REQUIRED_PARAMETERS, RunConfig
from core.systems.benchmarks import SINE_FORCING, linear_process, pitchfork_process
from core.systems.forcing import ForcingR
from core.systems.lorenz import (
    LorenzParams,
    absorbing_radius,
    lorenz_absorbing_ball,
    lorenz_nonauto_process,
    lorenz_process,
)
from core.systems.navier_stokes import GalerkinBasis, GalerkinForcing, NseParams, nse_process

DEFAULT_INTERVAL_RADIUS = 2.0
DEFAULT_NSE_SEED_POINTS = 64


@dataclass(frozen=True, slots=True)
class SeedGeometry:
    """A closed ball (an interval in one dimension) to sample seed points from."""

    center: np.ndarray
    radius: float

    @classmethod
    def cover(cls, balls: Iterable[SeedGeometry]) -> SeedGeometry:
        """A ball containing every given ball: centred on the bounding-box midpoint."""
        balls = list(balls)
        centers = np.stack([ball.center for ball in balls])
        middle = 0.5 * (centers.min(axis=0) + centers.max(axis=0))
        radius = max(ball.radius + float(np.linalg.norm(ball.center - middle)) for ball in balls)
        return cls(middle, radius)


def require_point(cfg: RunConfig, lam: ParameterPoint):
    missing = [name for name in REQUIRED_PARAMETERS[cfg.system] if name not in lam]
    if missing:
        raise ValueError(f"parameters.{missing[0]} is required for a single {cfg.system.value} run")


def nse_basis(cfg: RunConfig) -> GalerkinBasis:
    return GalerkinBasis(cfg.nse.kmax)


def lorenz_forcing(cfg: RunConfig, lam: ParameterPoint) -> ForcingR:
    if cfg.system is SystemKind.LORENZ_AUTO:
        return ForcingR.constant(lam["r"])
    return cfg.forcing


def linear_forcing(cfg: RunConfig) -> ForcingR:
    return cfg.forcing if cfg.forcing is not None else SINE_FORCING


def galerkin_forcing(cfg: RunConfig) -> GalerkinForcing:
    return cfg.forcing if cfg.forcing is not None else GalerkinForcing()


def build_process(cfg: RunConfig) -> ProcessDef:
    integrator, guard = cfg.integrator, cfg.guard_radius
    if cfg.system is SystemKind.LINEAR_BENCHMARK:
        return linear_process(linear_forcing(cfg), integrator, guard)
    if cfg.system is SystemKind.PITCHFORK_BENCHMARK:
        return pitchfork_process(integrator, guard)
    if cfg.system is SystemKind.LORENZ_AUTO:
        return lorenz_process(integrator, guard)
    if cfg.system is SystemKind.LORENZ_NONAUTO:
        return lorenz_nonauto_process(cfg.forcing, integrator, guard)
    return nse_process(nse_basis(cfg), galerkin_forcing(cfg), integrator, guard)


def forcing_period(cfg: RunConfig) -> float | None:
    """Common period of the time dependence; None when autonomous, inf when quasi-periodic."""
    if cfg.system is SystemKind.LORENZ_AUTO:
        return None
    if cfg.system is SystemKind.PITCHFORK_BENCHMARK:
        eps_values = [cfg.parameters.get("eps", 0.0)] + [v for name, values in cfg.grid_axes if name == "eps" for v in values]
        return 2.0 * math.pi if any(value != 0.0 for value in eps_values) else None
    if cfg.system is SystemKind.NSE_GALERKIN:
        forcing = galerkin_forcing(cfg)
        return None if forcing.is_autonomous or forcing.is_zero else 2.0 * math.pi / abs(forcing.frequency)
    if cfg.system is SystemKind.LINEAR_BENCHMARK:
        return linear_forcing(cfg).common_period()
    return cfg.forcing.common_period()


def process_dim(cfg: RunConfig) -> int:
    if cfg.system is SystemKind.NSE_GALERKIN:
        return nse_basis(cfg).dim
    return 3 if cfg.system.is_lorenz else 1


def seed_geometry(cfg: RunConfig, lam: ParameterPoint) -> SeedGeometry:
    """
    Absorbing ball for ``lam`` valid for every start time. Lorenz balls are
    centred where the shifted coordinates vanish (at mid-range r for the
    forced system); user overrides in ``[seed_set]`` take precedence.
    """
    spec = cfg.seed_set
    dim = process_dim(cfg)
    if cfg.system.is_lorenz:
        p = LorenzParams(lam["sigma"], lam["b"])
        forcing = lorenz_forcing(cfg, lam)
        if cfg.system is SystemKind.LORENZ_AUTO:
            center, radius = np.array([0.0, 0.0, p.sigma + lam["r"]]), absorbing_radius(p, forcing.R0)
        else:
            center, radius = np.array([0.0, 0.0, p.sigma]), absorbing_radius(p, forcing.R0) + forcing.R0
    elif cfg.system is SystemKind.NSE_GALERKIN:
        params = NseParams(lam["nu"], galerkin_forcing(cfg).sup_norm())
        center, radius = np.zeros(dim), math.sqrt(2.0) * params.rho0 + 1.0
    elif cfg.system is SystemKind.PITCHFORK_BENCHMARK:
        mu, eps = lam["mu"], abs(lam.get("eps", 0.0))
        center, radius = np.zeros(1), max(DEFAULT_INTERVAL_RADIUS, math.sqrt(max(mu, 0.0)) + 1.0 + eps)
    else:
        center, radius = np.zeros(1), DEFAULT_INTERVAL_RADIUS

    if spec.center is not None:
        if len(spec.center) != dim:
            raise ValueError(f"seed_set.center must have {dim} coordinates")
        center = np.asarray(spec.center, dtype=np.float64)
    if spec.radius is not None:
        radius = spec.radius
    return SeedGeometry(center, radius)


def seed_points(cfg: RunConfig) -> int:
    if cfg.seed_set.points is not None:
        return cfg.seed_set.points
    if cfg.system is SystemKind.NSE_GALERKIN:
        return DEFAULT_NSE_SEED_POINTS
    return cfg.points_3d if cfg.system.is_lorenz else cfg.points_1d


def sample_geometry(cfg: RunConfig, geometry: SeedGeometry) -> PointCloud:
    n = seed_points(cfg)
    if geometry.center.size == 1:
        c = float(geometry.center[0])
        return sample_interval(c - geometry.radius, c + geometry.radius, max(n, 2))
    return sample_ball(geometry.center.size, geometry.radius, n, cfg.seed, geometry.center)


def pullback_seed(cfg: RunConfig, lam: ParameterPoint) -> SeedSet:
    """
    Seed set for a single pullback run. For the forced Lorenz system without
    overrides this is the time-dependent ball D(s); otherwise a fixed cloud.
    """
    if cfg.system is SystemKind.LORENZ_NONAUTO and cfg.seed_set.radius is None and cfg.seed_set.center is None:
        return lorenz_absorbing_ball(LorenzParams(lam["sigma"], lam["b"]), cfg.forcing, seed_points(cfg), cfg.seed)
    return sample_geometry(cfg, seed_geometry(cfg, lam))


def uniform_seed(cfg: RunConfig, lam: ParameterPoint) -> PointCloud:
    """Set K absorbing uniformly in the start time."""
    return sample_geometry(cfg, seed_geometry(cfg, lam))


def shared_seed(cfg: RunConfig, points: Iterable[ParameterPoint]) -> PointCloud:
    """One cloud covering the absorbing balls of every grid point."""
    return sample_geometry(cfg, SeedGeometry.cover(seed_geometry(cfg, lam) for lam in points))
