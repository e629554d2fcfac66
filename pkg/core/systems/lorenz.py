from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.attractors.sampling import sample_ball
from core.geometry.point_cloud import PointCloud
from core.process.process import IntegratorConfig, ParameterPoint, ProcessDef, sample_trajectory
from core.systems.forcing import ForcingR
from core.systems.reports import BoundCheck, BoundReport
from core.util.logger import Logger

DEFAULT_STRIDE = 0.01
# Margin added to F0 / sqrt(2 sigma0 b) when building absorbing seed sets.
ABSORBING_MARGIN = 1.0
TRIAL_SIGMA_RANGE = (0.25, 4.0)
TRIAL_B_RANGE = (1.0, 4.0)


@dataclass(frozen=True, slots=True)
class LorenzParams:
    """Lorenz parameters; ``r`` is only used by the autonomous system."""

    sigma: float
    b: float
    r: float | None = None

    def __post_init__(self):
        for name in ("sigma", "b"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"parameters.{name} must be positive, got {value!r}")
        if self.r is not None and (not np.isfinite(self.r) or self.r <= 0.0):
            raise ValueError(f"parameters.r must be positive, got {self.r!r}")

    @classmethod
    def from_point(cls, lam: ParameterPoint) -> LorenzParams:
        return cls(lam["sigma"], lam["b"], lam.get("r"))

    def to_point(self) -> ParameterPoint:
        values = {"sigma": self.sigma, "b": self.b}
        if self.r is not None:
            values["r"] = self.r
        return ParameterPoint.from_dict(values)

    @property
    def norm(self) -> float:
        """Euclidean norm of (sigma, b)."""
        return float(np.hypot(self.sigma, self.b))


@dataclass(frozen=True, slots=True)
class LorenzBounds:
    """Bound constants; ``tail`` is F0 / sqrt(2 sigma0 b), the asymptotic radius of |u(t)|."""

    F0: float
    sigma0: float
    R1: float
    R2: float
    R3: float
    tail: float

    def to_dict(self) -> dict[str, float]:
        return {"F0": self.F0, "sigma0": self.sigma0, "R1": self.R1, "R2": self.R2, "R3": self.R3, "tail": self.tail}


@dataclass(frozen=True, slots=True)
class BoxBounds:
    """Constants uniform over parameters in [delta, mu]^2 and initial data |v(0)| <= M."""

    F_star: float
    sigma_star: float
    R1_star: float
    R2_star: float
    R3_star: float

    def to_dict(self) -> dict[str, float]:
        return {
            "F_star": self.F_star,
            "sigma_star": self.sigma_star,
            "R1_star": self.R1_star,
            "R2_star": self.R2_star,
            "R3_star": self.R3_star,
        }


# ---------------------------
# Vector fields
# ---------------------------

def lorenz_field(p: LorenzParams, x: np.ndarray) -> np.ndarray:
    """(-sigma x + sigma y, r x - y - x z, -b z + x y) for states of shape (..., 3)."""
    if p.r is None:
        raise ValueError("the autonomous Lorenz field needs parameters.r")
    return _lorenz_rhs(p.sigma, p.b, p.r, np.asarray(x, dtype=np.float64))


def lorenz_nonauto_field(p: LorenzParams, forcing: ForcingR, t: float, x: np.ndarray) -> np.ndarray:
    """Lorenz field with r replaced by the forcing value r(t)."""
    return _lorenz_rhs(p.sigma, p.b, forcing.r_fn(t), np.asarray(x, dtype=np.float64))


def _lorenz_rhs(sigma: float, b: float, r, x: np.ndarray) -> np.ndarray:
    xs, ys, zs = x[..., 0], x[..., 1], x[..., 2]
    return np.stack((-sigma * xs + sigma * ys, r * xs - ys - xs * zs, -b * zs + xs * ys), axis=-1)


def lorenz_forcing_F(p: LorenzParams, forcing: ForcingR, t: float):
    """F(t) = -b (sigma + r(t)) - r'(t), the forcing of the shifted system."""
    return -p.b * (p.sigma + forcing.r_fn(t)) - forcing.r_prime_fn(t)


def lorenz_w_field(p: LorenzParams, forcing: ForcingR, t: float, u: np.ndarray) -> np.ndarray:
    """Field in shifted coordinates u = (x, y, w), w = z - sigma - r(t)."""
    u = np.asarray(u, dtype=np.float64)
    xs, ys, ws = u[..., 0], u[..., 1], u[..., 2]
    return np.stack(
        (
            -p.sigma * xs + p.sigma * ys,
            -ys - p.sigma * xs - xs * ws,
            -p.b * ws + xs * ys + lorenz_forcing_F(p, forcing, t),
        ),
        axis=-1,
    )


def to_w_coords(p: LorenzParams, forcing: ForcingR, t, v: np.ndarray) -> np.ndarray:
    """Map v = (x, y, z) to u = (x, y, z - sigma - r(t)); ``t`` may be an array matching v's leading axis."""
    u = np.array(v, dtype=np.float64, copy=True)
    u[..., 2] = u[..., 2] - p.sigma - forcing.r_fn(t)
    return u


def from_w_coords(p: LorenzParams, forcing: ForcingR, t, u: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_w_coords`."""
    v = np.array(u, dtype=np.float64, copy=True)
    v[..., 2] = v[..., 2] + p.sigma + forcing.r_fn(t)
    return v


# ---------------------------
# Bound constants
# ---------------------------

def compute_bounds(p1: LorenzParams, p2: LorenzParams, R0: float, v0_norm: float) -> LorenzBounds:
    """
    F0 = b(sigma + R0) + R0, sigma0 = min{1, sigma, b/2},
    R1 = |v0| + 2(sigma + R0) + F0 / sqrt(2 sigma0 b), R2 = R1 + 1/8,
    R3 = R0 + 4 R1 + |p1| + |p2|. sigma and b come from ``p1``.
    """
    if R0 < 0.0 or v0_norm < 0.0:
        raise ValueError("R0 and v0_norm must be non-negative")
    F0 = p1.b * (p1.sigma + R0) + R0
    sigma0 = min(1.0, p1.sigma, p1.b / 2.0)
    tail = F0 / np.sqrt(2.0 * sigma0 * p1.b)
    R1 = v0_norm + 2.0 * (p1.sigma + R0) + tail
    R2 = R1 + 0.125
    R3 = R0 + 4.0 * R1 + p1.norm + p2.norm
    return LorenzBounds(float(F0), float(sigma0), float(R1), float(R2), float(R3), float(tail))


def compute_box_bounds(delta: float, mu: float, R0: float, M: float) -> BoxBounds:
    """
    Constants valid for every (sigma, b) in [delta, mu]^2 and |v(0)| <= M:
    F* = mu(mu + R0) + R0, sigma* = min{1, delta/2},
    R1* = M + 2(mu + R0) + F* / (2 sigma*), R2* = R1* + 1/8,
    R3* = R0 + 4 R1* + 2 sqrt(2) mu.
    """
    if not 0.0 < delta <= mu:
        raise ValueError(f"parameter box needs 0 < delta <= mu, got [{delta}, {mu}]")
    if R0 < 0.0 or M < 0.0:
        raise ValueError("R0 and M must be non-negative")
    F_star = mu * (mu + R0) + R0
    sigma_star = min(1.0, delta / 2.0)
    R1_star = M + 2.0 * (mu + R0) + F_star / (2.0 * sigma_star)
    return BoxBounds(
        float(F_star),
        float(sigma_star),
        float(R1_star),
        float(R1_star + 0.125),
        float(R0 + 4.0 * R1_star + 2.0 * np.sqrt(2.0) * mu),
    )


def absorbing_radius(p: LorenzParams, R0: float, margin: float = ABSORBING_MARGIN) -> float:
    """Radius of the forward-invariant absorbing ball in u-coordinates."""
    return compute_bounds(p, p, R0, 0.0).tail + margin


# ---------------------------
# Processes and seed sets
# ---------------------------

def lorenz_process(integrator: IntegratorConfig = IntegratorConfig(), guard_radius: float = 1e6) -> ProcessDef:
    """Autonomous Lorenz process; parameters ``sigma``, ``b``, ``r``."""

    def field(t, x, lam):
        return _lorenz_rhs(lam["sigma"], lam["b"], lam["r"], x)

    return ProcessDef(3, field, guard_radius, integrator, "lorenz_auto")


def lorenz_nonauto_process(
    forcing: ForcingR, integrator: IntegratorConfig = IntegratorConfig(), guard_radius: float = 1e6
) -> ProcessDef:
    """Lorenz process driven by r(t); parameters ``sigma``, ``b``."""

    def field(t, x, lam):
        return _lorenz_rhs(lam["sigma"], lam["b"], forcing.r_fn(t), x)

    return ProcessDef(3, field, guard_radius, integrator, "lorenz_nonauto")


def lorenz_absorbing_ball(
    p: LorenzParams, forcing: ForcingR, n_points: int, seed: int = 0
) -> Callable[[float], PointCloud]:
    """
    Seed set D(s): the ball of radius F0 / sqrt(2 sigma0 b) + 1 in u-coordinates,
    mapped to v-coordinates at the start time s.
    """
    u_ball = sample_ball(3, absorbing_radius(p, forcing.R0), n_points, seed)

    def at(s: float) -> PointCloud:
        return PointCloud(from_w_coords(p, forcing, s, u_ball.points))

    return at


def lorenz_uniform_ball(p: LorenzParams, forcing: ForcingR, n_points: int, seed: int = 0) -> PointCloud:
    """Ball centred at (0, 0, sigma) containing D(s) for every start time s."""
    radius = absorbing_radius(p, forcing.R0) + forcing.R0
    ball = sample_ball(3, radius, n_points, seed)
    return PointCloud(ball.points + np.array([0.0, 0.0, p.sigma]))


# ---------------------------
# Bound verification
# ---------------------------

def _sample_times(horizon: float, stride: float) -> np.ndarray:
    if horizon <= 0.0 or stride <= 0.0:
        raise ValueError("horizon and stride must be positive")
    return np.linspace(0.0, horizon, int(round(horizon / stride)) + 1)


def _norms(states: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(states * states, axis=-1))


def verify_absorbing_bound(
    p: LorenzParams,
    forcing: ForcingR,
    v0,
    horizon: float,
    *,
    integrator: IntegratorConfig = IntegratorConfig(),
    stride: float = DEFAULT_STRIDE,
) -> BoundReport:
    """
    Integrate the forced Lorenz system from v0 at t = 0 and compare the
    sampled |u(t)|, |v(t)| with R1 and with the exponential decay envelopes
    of the u- and v-coordinates.
    """
    v0 = np.asarray(v0, dtype=np.float64)
    if not np.all(np.isfinite(v0)):
        raise ValueError("v0 must be finite")
    v0_norm = float(np.linalg.norm(v0))
    bounds = compute_bounds(p, p, forcing.R0, v0_norm)

    times = _sample_times(horizon, stride)
    proc = lorenz_nonauto_process(forcing, integrator)
    v = sample_trajectory(proc, p.to_point(), times, v0)
    u = to_w_coords(p, forcing, times, v)
    v_norm, u_norm = _norms(v), _norms(u)
    u0_norm = float(u_norm[0])

    decay = np.exp(-bounds.sigma0 * times)
    shift = p.sigma + forcing.R0
    rel_tol = integrator.rel_tol
    report = BoundReport(constants={**bounds.to_dict(), "R0": forcing.R0, "v0_norm": v0_norm, "u0_norm": u0_norm})
    report.checks.extend(
        [
            BoundCheck.evaluate("absorbing_u", times, u_norm, bounds.R1, rel_tol),
            BoundCheck.evaluate("absorbing_v", times, v_norm, bounds.R1, rel_tol),
            BoundCheck.evaluate("decay_u", times, u_norm, u0_norm * decay + bounds.tail, rel_tol),
            BoundCheck.evaluate("decay_v", times, v_norm, (v0_norm + shift) * decay + bounds.tail + shift, rel_tol),
        ]
    )
    return report


def verify_difference_bound(
    p1: LorenzParams,
    p2: LorenzParams,
    forcing: ForcingR,
    v0,
    horizon: float,
    *,
    integrator: IntegratorConfig = IntegratorConfig(),
    stride: float = DEFAULT_STRIDE,
) -> BoundReport:
    """
    Integrate both parameter points from the same v0 and compare the
    trajectory difference with the Gronwall bounds
    |vbar| <= e^{R2 t}(|vbar(0)| + (2 + R3 sqrt t)|lambar|) and
    |ubar|^2 <= |ubar(0)|^2 e^{2 R2 t} + R3^2 t e^{2 R2 t} |lambar|^2.
    """
    v0 = np.asarray(v0, dtype=np.float64)
    bounds = compute_bounds(p1, p2, forcing.R0, float(np.linalg.norm(v0)))
    times = _sample_times(horizon, stride)
    proc = lorenz_nonauto_process(forcing, integrator)

    v1 = sample_trajectory(proc, p1.to_point(), times, v0)
    v2 = sample_trajectory(proc, p2.to_point(), times, v0)
    u1 = to_w_coords(p1, forcing, times, v1)
    u2 = to_w_coords(p2, forcing, times, v2)
    vbar = _norms(v1 - v2)
    ubar_sq = np.sum((u1 - u2) ** 2, axis=-1)
    lam_bar = float(np.hypot(p1.sigma - p2.sigma, p1.b - p2.b))

    with np.errstate(over="ignore"):
        growth = np.exp(bounds.R2 * times)
        vbar_bound = growth * (vbar[0] + (2.0 + bounds.R3 * np.sqrt(times)) * lam_bar)
        ubar_bound = ubar_sq[0] * growth**2 + bounds.R3**2 * times * growth**2 * lam_bar**2

    rel_tol = integrator.rel_tol
    report = BoundReport(constants={**bounds.to_dict(), "R0": forcing.R0, "lambda_bar": lam_bar})
    report.checks.extend(
        [
            BoundCheck.evaluate("difference_v", times, vbar, vbar_bound, rel_tol),
            BoundCheck.evaluate("difference_u_squared", times, ubar_sq, ubar_bound, rel_tol),
        ]
    )
    return report


def _random_initial_state(rng: np.random.Generator, max_norm: float) -> np.ndarray:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return direction * max_norm * rng.uniform() ** (1.0 / 3.0)


def _random_params(rng: np.random.Generator) -> LorenzParams:
    return LorenzParams(rng.uniform(*TRIAL_SIGMA_RANGE), rng.uniform(*TRIAL_B_RANGE))


def run_bound_trials(
    forcing: ForcingR,
    trials: int,
    *,
    seed: int = 0,
    horizon: float = 100.0,
    difference_horizon: float = 5.0,
    max_initial_norm: float = 50.0,
    perturbation: float = 0.1,
    integrator: IntegratorConfig = IntegratorConfig(),
    stride: float = DEFAULT_STRIDE,
    threads: int = 1,
) -> BoundReport:
    """
    Randomized absorbing-ball and difference-bound checks.

    Each trial draws (sigma, b) uniformly from [1/4, 4] x [1, 4], an initial
    state with |v0| <= ``max_initial_norm`` and a second parameter point
    within ``perturbation`` of the first (clipped to the box). Draws happen
    up front so results do not depend on ``threads``.
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials!r}")
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(trials):
        p1 = _random_params(rng)
        v0 = _random_initial_state(rng, max_initial_norm)
        shift = rng.uniform(-perturbation, perturbation, size=2)
        p2 = LorenzParams(
            float(np.clip(p1.sigma + shift[0], *TRIAL_SIGMA_RANGE)),
            float(np.clip(p1.b + shift[1], *TRIAL_B_RANGE)),
        )
        draws.append((p1, p2, v0))

    def run(index: int) -> BoundReport:
        p1, p2, v0 = draws[index]
        trial = BoundReport()
        trial.extend(verify_absorbing_bound(p1, forcing, v0, horizon, integrator=integrator, stride=stride))
        trial.extend(verify_difference_bound(p1, p2, forcing, v0, difference_horizon, integrator=integrator, stride=stride))
        Logger.info(f"Bound trial {index + 1}/{trials}: sigma={p1.sigma:.4g}, b={p1.b:.4g}, held={trial.held}")
        return trial

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(index) for index in range(trials)]

    report = BoundReport(constants={"trials": float(trials), "R0": forcing.R0})
    for index, trial in enumerate(results):
        report.extend(trial, prefix=f"trial_{index:03d}/")
    return report
