from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from core.attractors.models import PullbackSchedule
from core.attractors.pullback import pullback_section
from core.attractors.uniform import period_multiple, s_grid_for_period, uniform_attractor
from core.continuity.equi_attraction import equi_attraction_rate, uniform_equi_attraction_rate
from core.continuity.models import EquiAttractionReport, ParameterGrid, SweepResult
from core.continuity.sweep import continuity_modulus, semicontinuity_split, sweep_pullback, sweep_uniform
from core.enums.exit_code import ExitCode
from core.enums.system_kind import SystemKind
from core.run import registry
from core.run.artifacts import ArtifactStore
from core.run.oracle import ORACLE_TOL, oracle_frame, run_oracle
from core.run.run_config import RunConfig
from core.systems.lorenz import LorenzParams, compute_bounds, compute_box_bounds, run_bound_trials
from core.systems.navier_stokes import (
    GalerkinState,
    NseParams,
    enstrophy_bound,
    verify_energy_estimates,
    verify_energy_transfer,
    viscosity_rescale_check,
)
from core.systems.reports import BoundReport
from core.util.logger import Logger

SECTIONS_DIR = "sweep/sections"
UNIFORMS_DIR = "sweep/uniform"
TRANSFER_STATES_PER_TRAJECTORY = 5


@dataclass(slots=True)
class CommandResult:
    exit_code: ExitCode
    artifacts: list[Path] = field(default_factory=list)
    summary: str = ""


def _run_meta(cfg: RunConfig) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "system": cfg.system.value,
        "seed": cfg.seed,
        "integrator": cfg.integrator.to_dict(),
    }
    if cfg.forcing is not None:
        meta["forcing"] = cfg.forcing.to_dict()
    return meta


def _schedule(cfg: RunConfig, t: float) -> PullbackSchedule:
    spec = cfg.pullback
    if spec.s_list is not None:
        return PullbackSchedule(spec.s_list, spec.tol, spec.consecutive_required)
    return PullbackSchedule.geometric(t, spec.tol, spec.t0, spec.depth, spec.consecutive_required)


def _uniform_window(cfg: RunConfig) -> tuple[float, tuple[float, ...]]:
    period = registry.forcing_period(cfg)
    s_grid = s_grid_for_period(period, cfg.uniform.s_points, cfg.uniform.s_window)
    return period_multiple(cfg.uniform.t_window, period), s_grid


def _evolve_options(cfg: RunConfig) -> dict[str, Any]:
    return {"batch_size": cfg.batch_size, "threads": cfg.threads, "policy": cfg.blowup_policy}


def _section_stem(index: int) -> str:
    return f"{SECTIONS_DIR}/section_{index:03d}"


def _uniform_stem(index: int) -> str:
    return f"{UNIFORMS_DIR}/uniform_{index:03d}"


def cmd_pullback(cfg: RunConfig) -> CommandResult:
    """Pullback section at ``pullback.t``; writes ``section.csv`` and ``section.json``."""
    lam = cfg.lam
    registry.require_point(cfg, lam)
    t = cfg.pullback.t
    schedule = _schedule(cfg, t)
    section = pullback_section(
        registry.build_process(cfg),
        lam,
        t,
        registry.pullback_seed(cfg, lam),
        schedule,
        cfg.pullback.merge_radius,
        **_evolve_options(cfg),
    )
    store = ArtifactStore(cfg.output_dir)
    paths = store.write_section("section", section, _run_meta(cfg) | {"schedule": schedule.to_dict()})
    code = ExitCode.SUCCESS if section.converged else ExitCode.NOT_CONVERGED
    return CommandResult(code, paths, f"section at t={t:g}: {len(section.cloud)} points, converged={section.converged}")


def cmd_uniform(cfg: RunConfig) -> CommandResult:
    """Uniform attractor approximation; writes ``uniform.csv`` and ``uniform.json``."""
    lam = cfg.lam
    registry.require_point(cfg, lam)
    window, s_grid = _uniform_window(cfg)
    uniform = uniform_attractor(
        registry.build_process(cfg),
        lam,
        registry.uniform_seed(cfg, lam),
        window,
        s_grid,
        cfg.uniform.effective_merge_radius,
        cfg.uniform.tol,
        cfg.uniform.max_doublings,
        **_evolve_options(cfg),
    )
    store = ArtifactStore(cfg.output_dir)
    paths = store.write_uniform("uniform", uniform, _run_meta(cfg) | {"tol": cfg.uniform.tol})
    code = ExitCode.SUCCESS if uniform.converged else ExitCode.NOT_CONVERGED
    return CommandResult(code, paths, f"uniform attractor: {len(uniform.cloud)} points, converged={uniform.converged}")


def _axis_frame(grid: ParameterGrid, indices: list[int]) -> pd.DataFrame:
    points = grid.points
    return pd.DataFrame(
        [[points[index][name] for name in grid.axis_names] for index in indices], columns=list(grid.axis_names)
    )


def _write_center_tables(store: ArtifactStore, cfg: RunConfig, result: SweepResult, prefix: str) -> list[Path]:
    center = cfg.grid_center
    modulus = pd.DataFrame(continuity_modulus(result, center), columns=["delta", "modulus"])
    split = semicontinuity_split(result, center)
    table = _axis_frame(result.grid, [result.grid.index_of(lam) for lam, _ in split])
    table["forward"] = [pair.forward for _, pair in split]
    table["backward"] = [pair.backward for _, pair in split]
    table["symmetric"] = [pair.symmetric for _, pair in split]
    return [
        store.write_frame(f"sweep/{prefix}modulus.csv", modulus),
        store.write_frame(f"sweep/{prefix}semicontinuity.csv", table),
    ]


def _write_failures(store: ArtifactStore, result: SweepResult, name: str) -> list[Path]:
    if not result.failures:
        return []
    indices = sorted(result.failures)
    table = _axis_frame(result.grid, indices)
    table["message"] = [result.failures[index] for index in indices]
    return [store.write_frame(f"sweep/{name}", table)]


def cmd_sweep(cfg: RunConfig) -> CommandResult:
    """
    Pullback sections over the parameter grid (and uniform approximations
    when ``grid.uniform`` is set) plus the adjacent-pair summary tables.
    """
    grid = cfg.grid
    proc = registry.build_process(cfg)
    seed = registry.shared_seed(cfg, grid.points)
    t = cfg.pullback.t
    schedule = _schedule(cfg, t)
    store = ArtifactStore(cfg.output_dir)
    meta = _run_meta(cfg) | {"grid": grid.to_dict()}

    result = sweep_pullback(
        proc, grid, t, seed, schedule, cfg.pullback.merge_radius, full_matrix=cfg.full_matrix, **_evolve_options(cfg)
    )
    paths: list[Path] = []
    for index in sorted(result.sections):
        paths += store.write_section(_section_stem(index), result.sections[index], meta | {"schedule": schedule.to_dict()})
    paths.append(store.write_frame("sweep/summary.csv", result.summary_frame()))
    paths += _write_failures(store, result, "failures.csv")
    if cfg.grid_center is not None:
        paths += _write_center_tables(store, cfg, result, "")
    complete = not result.failures and all(section.converged for section in result.sections.values())

    if cfg.sweep_uniform:
        window, s_grid = _uniform_window(cfg)
        uniforms = sweep_uniform(
            proc,
            grid,
            seed,
            window,
            s_grid,
            cfg.uniform.effective_merge_radius,
            cfg.uniform.tol,
            cfg.uniform.max_doublings,
            full_matrix=cfg.full_matrix,
            **_evolve_options(cfg),
        )
        for index in sorted(uniforms.sections):
            paths += store.write_uniform(_uniform_stem(index), uniforms.sections[index], meta)
        paths.append(store.write_frame("sweep/uniform_summary.csv", uniforms.summary_frame()))
        paths += _write_failures(store, uniforms, "uniform_failures.csv")
        if cfg.grid_center is not None:
            paths += _write_center_tables(store, cfg, uniforms, "uniform_")
        complete = complete and not uniforms.failures and all(u.converged for u in uniforms.sections.values())

    code = ExitCode.SUCCESS if complete else ExitCode.NOT_CONVERGED
    return CommandResult(code, paths, f"sweep over {grid.size} points, {len(result.failures)} failed")


def _per_lambda_frame(report: EquiAttractionReport, grid: ParameterGrid) -> pd.DataFrame:
    points = grid.points
    rows = [
        [value, index] + [points[index][name] for name in grid.axis_names] + [distance]
        for value, index, distance in report.per_lambda
    ]
    return pd.DataFrame(rows, columns=[report.variable, "index", *grid.axis_names, "distance"])


def cmd_equi(cfg: RunConfig) -> CommandResult:
    """
    Equi-attraction rates from the sections written by ``sweep`` into the
    same output directory.
    """
    if not cfg.equi.s_values and not cfg.equi.t_values:
        raise ValueError("equi.s_values or equi.t_values is required")
    grid = cfg.grid
    points = grid.points
    proc = registry.build_process(cfg)
    seed = registry.shared_seed(cfg, points)
    store = ArtifactStore(cfg.output_dir)
    options = {"batch_size": cfg.batch_size, "threads": cfg.threads}
    paths: list[Path] = []

    if cfg.equi.s_values:
        sections = {index: store.read_section(_section_stem(index), lam) for index, lam in enumerate(points)}
        t = sections[0].t
        report = equi_attraction_rate(proc, grid, t, seed, cfg.equi.s_values, sections, **options)
        paths.append(store.write_frame("equi/pullback_rates.csv", report.to_frame()))
        paths.append(store.write_frame("equi/pullback_per_lambda.csv", _per_lambda_frame(report, grid)))

    if cfg.equi.t_values:
        uniforms = {index: store.read_uniform(_uniform_stem(index), lam) for index, lam in enumerate(points)}
        report = uniform_equi_attraction_rate(
            proc, grid, seed, cfg.equi.t_values, uniforms[0].s_grid, uniforms, **options
        )
        paths.append(store.write_frame("equi/uniform_rates.csv", report.to_frame()))
        paths.append(store.write_frame("equi/uniform_per_lambda.csv", _per_lambda_frame(report, grid)))

    return CommandResult(ExitCode.SUCCESS, paths, f"equi-attraction over {grid.size} points")


def _lorenz_bounds(cfg: RunConfig) -> BoundReport:
    lam = cfg.lam
    if cfg.system is SystemKind.LORENZ_AUTO:
        registry.require_point(cfg, lam)
    forcing = registry.lorenz_forcing(cfg, lam)
    spec = cfg.bounds
    report = run_bound_trials(
        forcing,
        spec.trials,
        seed=cfg.seed,
        horizon=spec.horizon,
        difference_horizon=spec.difference_horizon,
        max_initial_norm=spec.max_initial_norm,
        perturbation=spec.perturbation,
        integrator=cfg.integrator,
        stride=spec.stride,
        threads=cfg.threads,
    )
    if "sigma" in lam and "b" in lam:
        p = LorenzParams(lam["sigma"], lam["b"])
        for key, value in compute_bounds(p, p, forcing.R0, spec.max_initial_norm).to_dict().items():
            report.constants[f"bounds/{key}"] = value
    box = compute_box_bounds(0.25, 4.0, forcing.R0, spec.max_initial_norm)
    for key, value in box.to_dict().items():
        report.constants[f"box/{key}"] = value
    return report


def _nse_bounds(cfg: RunConfig) -> BoundReport:
    lam = cfg.lam
    registry.require_point(cfg, lam)
    nu = lam["nu"]
    spec = cfg.nse
    basis = registry.nse_basis(cfg)
    forcing = registry.galerkin_forcing(cfg)
    report = BoundReport(constants=NseParams(nu, forcing.sup_norm()).to_dict())

    transfer = verify_energy_transfer(
        basis,
        spec.trajectories * TRANSFER_STATES_PER_TRAJECTORY,
        max(spec.u0_norm, 1.0),
        seed=cfg.seed,
        rel_tol=cfg.integrator.rel_tol,
    )
    report.checks.append(transfer)

    states = [GalerkinState.random(basis, spec.u0_norm, spec.kcut, cfg.seed + index) for index in range(spec.trajectories)]
    for index, u0 in enumerate(states):
        Logger.info(f"Energy estimates trajectory {index + 1}/{spec.trajectories}")
        trajectory = verify_energy_estimates(
            nu, forcing, u0, spec.horizon, basis=basis, integrator=cfg.integrator, samples=spec.samples
        )
        report.extend(trajectory, prefix=f"trajectory_{index:03d}/")
    for rescale_nu in spec.rescale_nus:
        check = viscosity_rescale_check(
            rescale_nu, forcing, states[0], spec.horizon, basis=basis, integrator=cfg.integrator
        )
        report.extend(check, prefix=f"rescale_nu_{rescale_nu:g}/")
    if spec.c0 is not None and spec.enstrophy_radius is not None:
        params = NseParams(nu, forcing.sup_norm())
        bound = enstrophy_bound(nu, params.lambda1, params.G, spec.c0, spec.enstrophy_radius)
        for key, value in bound.to_dict().items():
            report.constants[f"enstrophy/{key}"] = value
    return report


def cmd_verify_bounds(cfg: RunConfig) -> CommandResult:
    """
    Check the a priori bounds along sampled trajectories; exit 0 only when
    every inequality held at every sample.
    """
    if cfg.system.is_lorenz:
        report = _lorenz_bounds(cfg)
    elif cfg.system is SystemKind.NSE_GALERKIN:
        report = _nse_bounds(cfg)
    else:
        raise ValueError(f"verify-bounds supports the lorenz and nse_galerkin systems, not {cfg.system.value}")

    store = ArtifactStore(cfg.output_dir)
    paths = [
        store.write_frame("bounds/bounds.csv", report.to_frame()),
        store.write_json("bounds/constants.json", _run_meta(cfg) | {"constants": report.constants}),
    ]
    code = ExitCode.SUCCESS if report.held else ExitCode.NOT_CONVERGED
    failed = sum(not check.held for check in report.checks)
    return CommandResult(code, paths, f"{len(report.checks)} checks, {failed} failed, {report.violations} violations")


def cmd_oracle(cfg: RunConfig, tol: float | None = None) -> CommandResult:
    """
    Closed-form benchmark table, printed and written to ``oracle/oracle.csv``.

    Integrator, seed and threads come from ``cfg``; ``tol`` replaces the
    built-in pullback tolerance when given.
    """
    cases = run_oracle(cfg.integrator, cfg.seed, cfg.threads, ORACLE_TOL if tol is None else tol)
    frame = oracle_frame(cases)
    print(frame.to_string(index=False))
    path = ArtifactStore(cfg.output_dir).write_frame("oracle/oracle.csv", frame)
    passed = all(case.passed for case in cases)
    code = ExitCode.SUCCESS if passed else ExitCode.NOT_CONVERGED
    return CommandResult(code, [path], f"{sum(case.passed for case in cases)}/{len(cases)} oracle cases passed")
