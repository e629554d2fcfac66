from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping

import numpy as np
from scipy.integrate import solve_ivp

from core.enums.blowup_policy import BlowUpPolicy
from core.geometry.point_cloud import PointCloud, merge_dedup
from core.util.logger import Logger

SUPPORTED_METHODS = ("DOP853", "RK45")
DEFAULT_BATCH_SIZE = 256

# Vector field f(t, x, lam); x has shape (..., dim) and the result matches it.
VectorField = Callable[[float, np.ndarray, "ParameterPoint"], np.ndarray]


@dataclass(slots=True)
class IntegrationError(Exception):
    """Domain error raised when a trajectory cannot be integrated to its end time."""

    code: str
    time: float | None = None
    details: str = ""

    def __str__(self) -> str:
        where = f" at t={self.time:.6g}" if self.time is not None else ""
        return f"{self.code}{where}: {self.details}" if self.details else f"{self.code}{where}"


@dataclass(slots=True)
class BlowUpError(IntegrationError):
    """Trajectory norm exceeded the guard radius."""

    code: str = "blow_up"


@dataclass(slots=True)
class StiffnessError(IntegrationError):
    """Adaptive step size underflowed."""

    code: str = "stiffness"


@dataclass(frozen=True, slots=True)
class ParameterPoint:
    """Ordered, uniquely named real parameters (one point of the parameter space)."""

    coords: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        normalized = tuple((str(name), float(value)) for name, value in self.coords)
        names = [name for name, _ in normalized]
        if len(set(names)) != len(names):
            raise ValueError(f"parameter names must be unique, got {names}")
        for name, value in normalized:
            if not np.isfinite(value):
                raise ValueError(f"parameter {name} must be finite, got {value!r}")
        object.__setattr__(self, "coords", normalized)

    @classmethod
    def of(cls, **values: float) -> ParameterPoint:
        return cls(tuple(values.items()))

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> ParameterPoint:
        return cls(tuple(values.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.coords)

    @property
    def values(self) -> np.ndarray:
        return np.array([value for _, value in self.coords], dtype=np.float64)

    def __getitem__(self, name: str) -> float:
        for key, value in self.coords:
            if key == name:
                return value
        raise KeyError(name)

    def get(self, name: str, default: float | None = None) -> float | None:
        try:
            return self[name]
        except KeyError:
            return default

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def replace(self, **updates: float) -> ParameterPoint:
        """Return a copy with some values changed and unknown names appended."""
        merged = dict(self.coords)
        merged.update({name: float(value) for name, value in updates.items()})
        return ParameterPoint(tuple(merged.items()))

    def distance(self, other: ParameterPoint) -> float:
        """Euclidean distance between two points over the same names."""
        if self.names != other.names:
            raise ValueError(f"parameter names differ: {self.names} vs {other.names}")
        return float(np.linalg.norm(self.values - other.values))

    def label(self) -> str:
        return ",".join(f"{name}={value:.12g}" for name, value in self.coords)

    def to_dict(self) -> dict[str, float]:
        return dict(self.coords)


@dataclass(frozen=True, slots=True)
class IntegratorConfig:
    """Adaptive embedded Runge-Kutta settings (``DOP853`` is order 8(5,3), ``RK45`` order 5(4))."""

    method: str = "DOP853"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = 1.0

    def __post_init__(self):
        if self.method not in SUPPORTED_METHODS:
            raise ValueError(f"integrator.method must be one of {SUPPORTED_METHODS}, got {self.method!r}")
        for name in ("rel_tol", "abs_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"integrator.{name} must lie in (0, 1), got {value!r}")
        if not self.max_step > 0.0:
            raise ValueError(f"integrator.max_step must be positive, got {self.max_step!r}")

    def to_dict(self) -> dict[str, Any]:
        return {"method": self.method, "rel_tol": self.rel_tol, "abs_tol": self.abs_tol, "max_step": self.max_step}


@dataclass(frozen=True, slots=True)
class ProcessDef:
    """A parameterized vector field together with integrator settings; realizes S_lam(t, s)."""

    dim: int
    field: VectorField
    guard_radius: float = 1e6
    integrator: IntegratorConfig = IntegratorConfig()
    name: str = "process"

    def __post_init__(self):
        if int(self.dim) <= 0:
            raise ValueError(f"dim must be positive, got {self.dim!r}")
        if not self.guard_radius > 0.0:
            raise ValueError(f"guard_radius must be positive, got {self.guard_radius!r}")


@dataclass(slots=True)
class EvolvedPoints:
    """Images of a batch of points; ``dropped`` counts points lost to integration failures."""

    points: np.ndarray
    dropped: int = 0


def _as_points(proc: ProcessDef, x: Any) -> np.ndarray:
    array = np.array(x, dtype=np.float64, copy=True)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.ndim != 2 or array.shape[1] != proc.dim:
        raise ValueError(f"{proc.name}: expected states of dimension {proc.dim}, got shape {np.shape(x)}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{proc.name}: initial states must be finite")
    norms = np.sqrt(np.sum(array * array, axis=1))
    if np.any(norms > proc.guard_radius):
        raise ValueError(f"{proc.name}: initial state norm exceeds guard radius {proc.guard_radius:g}")
    return array


def _integrate(proc: ProcessDef, lam: ParameterPoint, times: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Integrate all rows of ``points`` together from ``times[0]`` and return the
    states at every sample time, shape ``(len(times), n, dim)``.
    """
    n, dim = points.shape
    guard_sq = proc.guard_radius * proc.guard_radius

    def rhs(t, y):
        return np.asarray(proc.field(t, y.reshape(n, dim), lam), dtype=np.float64).reshape(-1)

    def guard(t, y):
        states = y.reshape(n, dim)
        return guard_sq - float(np.max(np.sum(states * states, axis=1)))

    guard.terminal = True
    guard.direction = -1

    cfg = proc.integrator
    sol = solve_ivp(
        rhs,
        (float(times[0]), float(times[-1])),
        points.reshape(-1),
        method=cfg.method,
        t_eval=times,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        events=guard,
    )

    if sol.status == 1:
        exit_time = float(sol.t_events[0][0])
        raise BlowUpError(time=exit_time, details=f"{proc.name} left the ball of radius {proc.guard_radius:g}")
    if sol.status != 0:
        failure_time = float(sol.t[-1]) if sol.t.size else float(times[0])
        if "step size" in str(sol.message).lower():
            raise StiffnessError(time=failure_time, details=str(sol.message))
        raise IntegrationError("integration_failed", failure_time, str(sol.message))

    states = sol.y.T.reshape(len(times), n, dim)
    if not np.all(np.isfinite(states)):
        raise BlowUpError(time=float(times[-1]), details=f"{proc.name} produced non-finite states")
    return states


def evolve(proc: ProcessDef, lam: ParameterPoint, s: float, t: float, x0: Iterable[float]) -> np.ndarray:
    """
    Return S_lam(t, s) x0.

    ``t == s`` returns a copy of ``x0`` without integrating.

    :raises ValueError: if ``t < s`` or ``x0`` lies outside the guard ball.
    :raises BlowUpError: if the trajectory leaves the guard ball.
    :raises StiffnessError: if the step size underflows.
    """
    if t < s:
        raise ValueError(f"evolve requires t >= s, got s={s}, t={t}")
    x = _as_points(proc, x0)
    if x.shape[0] != 1:
        raise ValueError("evolve takes a single state; use evolve_points for batches")
    if t == s:
        return x[0]
    return _integrate(proc, lam, np.array([s, t], dtype=np.float64), x)[-1, 0]


def sample_trajectory(proc: ProcessDef, lam: ParameterPoint, times: Iterable[float], x0: Iterable[float]) -> np.ndarray:
    """
    States of the trajectory through ``x0`` at ``times[0]``, sampled at each of
    ``times`` (strictly increasing). Returns an array of shape ``(len(times), dim)``.
    """
    grid = np.asarray(list(times), dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("times must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("times must be strictly increasing")
    x = _as_points(proc, x0)
    if x.shape[0] != 1:
        raise ValueError("sample_trajectory takes a single initial state")
    if grid.size == 1:
        return x.copy()
    return _integrate(proc, lam, grid, x)[:, 0, :]


def _evolve_batch(
    proc: ProcessDef, lam: ParameterPoint, s: float, t: float, batch: np.ndarray, policy: BlowUpPolicy
) -> EvolvedPoints:
    span = np.array([s, t], dtype=np.float64)
    try:
        return EvolvedPoints(_integrate(proc, lam, span, batch)[-1])
    except IntegrationError:
        if policy is BlowUpPolicy.ABORT:
            raise

    # Retry point by point so one bad state does not drop its batch neighbours.
    survivors = []
    dropped = 0
    for point in batch:
        try:
            survivors.append(_integrate(proc, lam, span, point.reshape(1, -1))[-1, 0])
        except IntegrationError:
            dropped += 1
    kept = np.array(survivors, dtype=np.float64).reshape(-1, proc.dim)
    return EvolvedPoints(kept, dropped)


def evolve_points(
    proc: ProcessDef,
    lam: ParameterPoint,
    s: float,
    t: float,
    points: Any,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    policy: BlowUpPolicy = BlowUpPolicy.ABORT,
) -> EvolvedPoints:
    """
    Evolve an ``(n, dim)`` array of states from ``s`` to ``t``.

    States are integrated in consecutive batches of ``batch_size`` rows; the
    batch layout never depends on ``threads``, so results are bit-identical
    for any worker count. Under ``BlowUpPolicy.DROP`` failing states are
    removed and counted instead of aborting the whole set.
    """
    if t < s:
        raise ValueError(f"evolve requires t >= s, got s={s}, t={t}")
    if batch_size <= 0:
        raise ValueError(f"batch_size must be positive, got {batch_size!r}")
    array = _as_points(proc, points)
    if t == s:
        return EvolvedPoints(array)

    batches = [array[start:start + batch_size] for start in range(0, array.shape[0], batch_size)]

    def run(batch: np.ndarray) -> EvolvedPoints:
        return _evolve_batch(proc, lam, s, t, batch, policy)

    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, batches))
    else:
        results = [run(batch) for batch in batches]

    dropped = sum(result.dropped for result in results)
    kept = np.concatenate([result.points for result in results], axis=0)
    return EvolvedPoints(kept, dropped)


def evolve_cloud(
    proc: ProcessDef,
    lam: ParameterPoint,
    s: float,
    t: float,
    cloud: PointCloud,
    merge_radius: float = 0.0,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    policy: BlowUpPolicy = BlowUpPolicy.ABORT,
) -> PointCloud:
    """
    Image of ``cloud`` under S_lam(t, s), thinned with ``merge_dedup``.

    :raises BlowUpError: under ``ABORT`` on the first failing state, under
        ``DROP`` only when every state was dropped.
    """
    if cloud.dim != proc.dim:
        raise ValueError(f"{proc.name}: cloud dimension {cloud.dim} does not match process dimension {proc.dim}")
    evolved = evolve_points(proc, lam, s, t, cloud.points, batch_size=batch_size, threads=threads, policy=policy)
    if evolved.dropped:
        Logger.warning(
            f"{proc.name} [{lam.label()}]: dropped {evolved.dropped} of {len(cloud)} points on [{s:g}, {t:g}]"
        )
    if evolved.points.shape[0] == 0:
        raise BlowUpError(time=t, details=f"{proc.name}: every point of the cloud was dropped")
    return merge_dedup(PointCloud(evolved.points), merge_radius)
