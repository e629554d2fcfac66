"""
Per-run configuration
=====================

A run is described by one TOML file::

    system = "linear_benchmark"
    seed = 0
    output_dir = "out/linear"

    [parameters]            # fixed parameter values
    rate = 1.0

    [forcing]               # r(t) for Lorenz / linear, body force for Navier-Stokes
    offset = 0.0
    terms = [{ amplitude = 1.0, frequency = 1.0, phase = 0.0 }]

    [grid.axes]             # sweep / equi only
    rate = [1.0, 2.0]

Every other table (``integrator``, ``seed_set``, ``pullback``, ``uniform``,
``equi``, ``bounds``, ``nse``) is optional; missing values come from the
application defaults in ``config.toml``. All problems are collected and
raised together as one :class:`ConfigError`, each message naming the
dotted field.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Mapping

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from core.config.configuration import AppDefaults, Config
from core.continuity.models import ParameterGrid
from core.enums.blowup_policy import BlowUpPolicy
from core.enums.system_kind import SystemKind
from core.process.process import SUPPORTED_METHODS, IntegratorConfig, ParameterPoint
from core.systems.forcing import ForcingR
from core.systems.navier_stokes import GalerkinForcing, forcing_from_modes
from core.util.app_paths import AppPaths
from core.util.validator import ConfigValidator

REQUIRED_PARAMETERS: dict[SystemKind, tuple[str, ...]] = {
    SystemKind.LORENZ_AUTO: ("sigma", "b", "r"),
    SystemKind.LORENZ_NONAUTO: ("sigma", "b"),
    SystemKind.LINEAR_BENCHMARK: ("rate",),
    SystemKind.PITCHFORK_BENCHMARK: ("mu",),
    SystemKind.NSE_GALERKIN: ("nu",),
}
OPTIONAL_PARAMETERS: dict[SystemKind, tuple[str, ...]] = {
    SystemKind.PITCHFORK_BENCHMARK: ("eps",),
}
POSITIVE_PARAMETERS = frozenset({"sigma", "b", "r", "rate", "nu"})
INTEGRATOR_METHODS = SUPPORTED_METHODS


@dataclass(slots=True)
class ConfigError(Exception):
    """Every validation problem found in a run configuration."""

    code: str
    messages: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        if not self.messages:
            return self.code
        return f"{self.code}:\n  " + "\n  ".join(self.messages)


@dataclass(frozen=True, slots=True)
class SeedSetSpec:
    """Overrides for the absorbing seed set; ``None`` keeps the system default."""

    radius: float | None = None
    center: tuple[float, ...] | None = None
    points: int | None = None


@dataclass(frozen=True, slots=True)
class PullbackSpec:
    t: float = 0.0
    tol: float = 1e-3
    t0: float = 5.0
    depth: int = 6
    consecutive_required: int = 2
    merge_radius: float | None = None
    s_list: tuple[float, ...] | None = None


@dataclass(frozen=True, slots=True)
class UniformSpec:
    t_window: float = 10.0
    s_points: int = 32
    s_window: float | None = None
    tol: float = 1e-3
    merge_radius: float | None = None
    max_doublings: int = 6

    @property
    def effective_merge_radius(self) -> float:
        return self.tol / 4.0 if self.merge_radius is None else self.merge_radius


@dataclass(frozen=True, slots=True)
class EquiSpec:
    s_values: tuple[float, ...] = ()
    t_values: tuple[float, ...] = ()


@dataclass(frozen=True, slots=True)
class BoundsSpec:
    trials: int = 100
    horizon: float = 100.0
    difference_horizon: float = 5.0
    stride: float = 0.01
    max_initial_norm: float = 50.0
    perturbation: float = 0.1


@dataclass(frozen=True, slots=True)
class NseSpec:
    kmax: int = 8
    trajectories: int = 20
    u0_norm: float = 5.0
    kcut: int = 2
    horizon: float = 5.0
    samples: int = 501
    rescale_nus: tuple[float, ...] = ()
    c0: float | None = None
    enstrophy_radius: float | None = None


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Validated description of one command run."""

    system: SystemKind
    parameters: ParameterPoint
    forcing: ForcingR | GalerkinForcing | None = None
    grid_axes: tuple[tuple[str, tuple[float, ...]], ...] = ()
    grid_center: ParameterPoint | None = None
    full_matrix: bool = False
    sweep_uniform: bool = False
    integrator: IntegratorConfig = IntegratorConfig()
    guard_radius: float = 1e6
    batch_size: int = 256
    blowup_policy: BlowUpPolicy = BlowUpPolicy.ABORT
    seed: int = 0
    threads: int = 1
    output_dir: Path = Path("out")
    points_1d: int = 1024
    points_3d: int = 4096
    seed_set: SeedSetSpec = SeedSetSpec()
    pullback: PullbackSpec = PullbackSpec()
    uniform: UniformSpec = UniformSpec()
    equi: EquiSpec = EquiSpec()
    bounds: BoundsSpec = BoundsSpec()
    nse: NseSpec = NseSpec()

    @property
    def lam(self) -> ParameterPoint:
        return self.parameters

    @property
    def grid(self) -> ParameterGrid:
        """Sweep grid; parameters not on an axis are fixed."""
        if not self.grid_axes:
            raise ValueError("grid.axes is required for parameter sweeps")
        axis_names = {name for name, _ in self.grid_axes}
        fixed = ParameterPoint(tuple((n, v) for n, v in self.parameters.coords if n not in axis_names))
        return ParameterGrid(self.grid_axes, fixed)

    def with_overrides(
        self,
        *,
        output_dir: str | Path | None = None,
        seed: int | None = None,
        tol: float | None = None,
        rel_tol: float | None = None,
        threads: int | None = None,
    ) -> RunConfig:
        """Apply command-line flags on top of the file values."""
        v = ConfigValidator
        updated = self
        if output_dir is not None:
            updated = replace(updated, output_dir=AppPaths.resolve_output_dir(output_dir))
        if seed is not None:
            updated = replace(updated, seed=v.ensure_nonnegative_int(seed, "--seed"))
        if tol is not None:
            tol = v.ensure_positive_float(tol, "--tol")
            updated = replace(updated, pullback=replace(updated.pullback, tol=tol), uniform=replace(updated.uniform, tol=tol))
        if rel_tol is not None:
            updated = replace(
                updated, integrator=replace(updated.integrator, rel_tol=v.ensure_unit_interval(rel_tol, "--rel-tol"))
            )
        if threads is not None:
            updated = replace(updated, threads=v.ensure_positive_int(threads, "--threads"))
        return updated

    # ---------------------------
    # Loading
    # ---------------------------
    @classmethod
    def from_file(cls, path: str | Path, defaults: Mapping[str, Any] | None = None) -> RunConfig:
        """
        Parse and validate a run file.

        :raises ConfigError: on TOML syntax errors (with line and column) or
            any invalid field.
        """
        source = Path(path)
        if not source.is_file():
            raise ConfigError("invalid_config", [f"{source}: file not found"])
        try:
            with open(source, "rb") as handle:
                data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("invalid_config", [f"{source}: {exc}"]) from exc
        return cls.from_dict(data, defaults, base_dir=source.parent)

    @classmethod
    def oracle_defaults(cls, defaults: Mapping[str, Any] | None = None) -> RunConfig:
        """Run settings for the benchmark table when no run file is given: application defaults only."""
        return cls.from_dict({"system": SystemKind.LINEAR_BENCHMARK.value, "parameters": {"rate": 1.0}}, defaults)

    @classmethod
    def from_dict(
        cls, data: Mapping[str, Any], defaults: Mapping[str, Any] | None = None, base_dir: Path | None = None
    ) -> RunConfig:
        reader = _Reader(Config.get() if defaults is None else defaults)
        return reader.read(data, base_dir)


class _Reader:
    """Collects field errors while reading a run file."""

    def __init__(self, defaults: Mapping[str, Any]):
        self.defaults = AppDefaults.wrap(defaults)
        self.errors: list[str] = []
        self.v = ConfigValidator

    def _default(self, section: str, key: str, fallback: Any) -> Any:
        return self.defaults.value(section, key, fallback)

    def take(self, table: Mapping[str, Any], section: str, key: str, cast: Callable[[Any, str], Any], default: Any) -> Any:
        name = f"{section}.{key}" if section else key
        if key not in table:
            return default
        try:
            return cast(table[key], name)
        except ValueError as exc:
            self.errors.append(str(exc))
            return default

    def table(self, data: Mapping[str, Any], name: str) -> Mapping[str, Any]:
        value = data.get(name, {})
        if not isinstance(value, Mapping):
            self.errors.append(f"{name} must be a table")
            return {}
        return value

    def _optional_float_tuple(self, value: Any, name: str) -> tuple[float, ...]:
        if isinstance(value, (str, bytes)) or not isinstance(value, (list, tuple)):
            raise ValueError(f"{name} must be a list of numbers")
        return tuple(self.v.ensure_finite_float(item, f"{name}[{i}]") for i, item in enumerate(value))

    def read(self, data: Mapping[str, Any], base_dir: Path | None) -> RunConfig:
        v = self.v
        system = None
        if "system" not in data:
            self.errors.append("system is required")
        else:
            try:
                system = v.parse_system_kind(data["system"], "system")
            except ValueError as exc:
                self.errors.append(str(exc))

        parameters = self._parameters(system, self.table(data, "parameters"))
        grid_table = self.table(data, "grid")
        axes = self._axes(system, grid_table.get("axes", {}))
        grid_center = self._center(grid_table.get("center"), parameters, axes)
        if system is not None:
            axis_names = {name for name, _ in axes}
            for name in REQUIRED_PARAMETERS[system]:
                if name not in parameters and name not in axis_names:
                    self.errors.append(f"parameters.{name} is required for {system.value}")

        integrator_table = self.table(data, "integrator")
        integrator = self._integrator(integrator_table)
        guard_radius = self.take(
            integrator_table, "integrator", "guard_radius", v.ensure_positive_float,
            float(self._default("integrator", "guard_radius", 1e6)),
        )
        batch_size = self.take(
            integrator_table, "integrator", "batch_size", v.ensure_positive_int,
            int(self._default("integrator", "batch_size", 256)),
        )
        policy = self.take(
            integrator_table, "integrator", "blowup_policy", v.parse_blowup_policy,
            self._policy_default(),
        )

        seed = self.take(data, "", "seed", v.ensure_nonnegative_int, int(self._default("run", "seed", 0)))
        threads = self.take(data, "", "threads", v.ensure_positive_int, int(self._default("run", "threads", 1)))
        output_value = self.take(data, "", "output_dir", lambda x, n: str(x), self._default("run", "output_dir", "out"))
        forcing = self._forcing(system, self.table(data, "forcing"))

        config = RunConfig(
            system=system or SystemKind.LINEAR_BENCHMARK,
            parameters=parameters,
            forcing=forcing,
            grid_axes=axes,
            grid_center=grid_center,
            full_matrix=self.take(grid_table, "grid", "full_matrix", v.ensure_boolean, False),
            sweep_uniform=self.take(grid_table, "grid", "uniform", v.ensure_boolean, False),
            integrator=integrator,
            guard_radius=guard_radius,
            batch_size=batch_size,
            blowup_policy=policy,
            seed=seed,
            threads=threads,
            output_dir=AppPaths.resolve_output_dir(output_value, base_dir),
            points_1d=int(self._default("sampling", "points_1d", 1024)),
            points_3d=int(self._default("sampling", "points_3d", 4096)),
            seed_set=self._seed_set(self.table(data, "seed_set")),
            pullback=self._pullback(self.table(data, "pullback")),
            uniform=self._uniform(self.table(data, "uniform")),
            equi=self._equi(self.table(data, "equi")),
            bounds=self._bounds(self.table(data, "bounds")),
            nse=self._nse(self.table(data, "nse")),
        )
        if self.errors:
            raise ConfigError("invalid_config", self.errors)
        return config

    def _policy_default(self) -> BlowUpPolicy:
        value = self._default("integrator", "blowup_policy", "abort")
        return value if isinstance(value, BlowUpPolicy) else self.v.parse_blowup_policy(value)

    def _check_parameter(self, system: SystemKind | None, name: str, value: Any, field_name: str) -> float | None:
        if system is not None and name not in REQUIRED_PARAMETERS[system] + OPTIONAL_PARAMETERS.get(system, ()):
            self.errors.append(f"{field_name} is not a parameter of {system.value}")
            return None
        try:
            if name in POSITIVE_PARAMETERS:
                return self.v.ensure_positive_float(value, field_name)
            return self.v.ensure_finite_float(value, field_name)
        except ValueError as exc:
            self.errors.append(str(exc))
            return None

    def _parameters(self, system: SystemKind | None, table: Mapping[str, Any]) -> ParameterPoint:
        coords = []
        for name, value in table.items():
            checked = self._check_parameter(system, name, value, f"parameters.{name}")
            if checked is not None:
                coords.append((name, checked))
        return ParameterPoint(tuple(coords))

    def _axes(self, system: SystemKind | None, table: Any) -> tuple[tuple[str, tuple[float, ...]], ...]:
        if not isinstance(table, Mapping):
            self.errors.append("grid.axes must be a table")
            return ()
        axes = []
        for name, values in table.items():
            field_name = f"grid.axes.{name}"
            try:
                ordered = self.v.ensure_strictly_increasing(values, field_name)
            except ValueError as exc:
                self.errors.append(str(exc))
                continue
            checked = [self._check_parameter(system, name, value, f"{field_name}[{i}]") for i, value in enumerate(ordered)]
            if all(value is not None for value in checked):
                axes.append((name, ordered))
        return tuple(axes)

    def _center(self, table: Any, parameters: ParameterPoint, axes) -> ParameterPoint | None:
        if table is None:
            return None
        if not isinstance(table, Mapping):
            self.errors.append("grid.center must be a table")
            return None
        axis_values = dict(axes)
        coords = []
        for name, _ in axes:
            if name not in table:
                self.errors.append(f"grid.center.{name} is required")
                return None
            value = self.take(table, "grid.center", name, self.v.ensure_finite_float, None)
            if value is None:
                return None
            if value not in axis_values[name]:
                self.errors.append(f"grid.center.{name} must be one of the axis values")
                return None
            coords.append((name, value))
        names = {name for name, _ in axes}
        fixed = tuple((n, val) for n, val in parameters.coords if n not in names)
        return ParameterPoint(tuple(coords) + fixed)

    def _integrator(self, table: Mapping[str, Any]) -> IntegratorConfig:
        v = self.v

        def method(value: Any, name: str) -> str:
            text = str(value)
            if text not in INTEGRATOR_METHODS:
                raise ValueError(f"{name} must be one of {', '.join(INTEGRATOR_METHODS)}, got {value!r}")
            return text

        values = {
            "method": self.take(table, "integrator", "method", method, str(self._default("integrator", "method", "DOP853"))),
            "rel_tol": self.take(
                table, "integrator", "rel_tol", v.ensure_unit_interval, float(self._default("integrator", "rel_tol", 1e-9))
            ),
            "abs_tol": self.take(
                table, "integrator", "abs_tol", v.ensure_unit_interval, float(self._default("integrator", "abs_tol", 1e-12))
            ),
            "max_step": self.take(
                table, "integrator", "max_step", v.ensure_positive_float, float(self._default("integrator", "max_step", 1.0))
            ),
        }
        try:
            return IntegratorConfig(**values)
        except ValueError as exc:
            self.errors.append(f"integrator: {exc}")
            return IntegratorConfig()

    def _forcing(self, system: SystemKind | None, table: Mapping[str, Any]) -> ForcingR | GalerkinForcing | None:
        if system is None:
            return None
        v = self.v
        if system is SystemKind.NSE_GALERKIN:
            modes = table.get("modes", [])
            if not isinstance(modes, list) or not all(isinstance(entry, Mapping) for entry in modes):
                self.errors.append("forcing.modes must be a list of tables")
                return None
            try:
                return forcing_from_modes(
                    modes,
                    modulation=self.take(table, "forcing", "modulation", v.ensure_finite_float, 0.0),
                    frequency=self.take(table, "forcing", "frequency", v.ensure_finite_float, 0.0),
                    phase=self.take(table, "forcing", "phase", v.ensure_finite_float, 0.0),
                )
            except (KeyError, TypeError, ValueError) as exc:
                self.errors.append(f"forcing.modes: {exc}")
                return None

        if system is SystemKind.PITCHFORK_BENCHMARK:
            if table:
                self.errors.append("forcing is not used by pitchfork_benchmark (use parameters.eps)")
            return None
        if system is SystemKind.LORENZ_AUTO:
            if table:
                self.errors.append("forcing is not used by lorenz_auto (use parameters.r)")
            return None
        if not table:
            if system is SystemKind.LORENZ_NONAUTO:
                self.errors.append("forcing is required for lorenz_nonauto")
            return None

        terms_value = table.get("terms", [])
        if not isinstance(terms_value, list) or not all(isinstance(entry, Mapping) for entry in terms_value):
            self.errors.append("forcing.terms must be a list of tables")
            return None
        terms = []
        for i, entry in enumerate(terms_value):
            section = f"forcing.terms[{i}]"
            terms.append(
                (
                    self.take(entry, section, "amplitude", v.ensure_finite_float, 0.0),
                    self.take(entry, section, "frequency", v.ensure_finite_float, 0.0),
                    self.take(entry, section, "phase", v.ensure_finite_float, 0.0),
                )
            )
        offset = self.take(table, "forcing", "offset", v.ensure_finite_float, 0.0)
        R0 = self.take(table, "forcing", "R0", v.ensure_nonnegative_float, None)
        forcing = ForcingR.sinusoids(terms, offset, R0)
        if R0 is not None and not forcing.check_on_grid(0.0, 100.0):
            self.errors.append("forcing.R0 does not bound |r| and |r'|")
        return forcing

    def _seed_set(self, table: Mapping[str, Any]) -> SeedSetSpec:
        v = self.v
        return SeedSetSpec(
            radius=self.take(table, "seed_set", "radius", v.ensure_positive_float, None),
            center=self.take(table, "seed_set", "center", self._optional_float_tuple, None),
            points=self.take(table, "seed_set", "points", v.ensure_positive_int, None),
        )

    def _pullback(self, table: Mapping[str, Any]) -> PullbackSpec:
        v = self.v

        def decreasing(value: Any, name: str) -> tuple[float, ...]:
            values = self._optional_float_tuple(value, name)
            if not values or any(b >= a for a, b in zip(values, values[1:])):
                raise ValueError(f"{name} must be a non-empty strictly decreasing list")
            return values

        spec = PullbackSpec(
            t=self.take(table, "pullback", "t", v.ensure_finite_float, 0.0),
            tol=self.take(table, "pullback", "tol", v.ensure_positive_float, float(self._default("pullback", "tol", 1e-3))),
            t0=self.take(table, "pullback", "t0", v.ensure_positive_float, float(self._default("pullback", "t0", 5.0))),
            depth=self.take(table, "pullback", "depth", v.ensure_positive_int, int(self._default("pullback", "depth", 6))),
            consecutive_required=self.take(
                table, "pullback", "consecutive_required", v.ensure_positive_int,
                int(self._default("pullback", "consecutive_required", 2)),
            ),
            merge_radius=self.take(table, "pullback", "merge_radius", v.ensure_nonnegative_float, None),
            s_list=self.take(table, "pullback", "s_list", decreasing, None),
        )
        if spec.s_list is not None and spec.s_list[0] > spec.t:
            self.errors.append("pullback.s_list must not start after pullback.t")
        return spec

    def _uniform(self, table: Mapping[str, Any]) -> UniformSpec:
        v = self.v
        return UniformSpec(
            t_window=self.take(table, "uniform", "t_window", v.ensure_positive_float, 10.0),
            s_points=self.take(table, "uniform", "s_points", v.ensure_positive_int, 32),
            s_window=self.take(table, "uniform", "s_window", v.ensure_positive_float, None),
            tol=self.take(table, "uniform", "tol", v.ensure_positive_float, float(self._default("pullback", "tol", 1e-3))),
            merge_radius=self.take(table, "uniform", "merge_radius", v.ensure_nonnegative_float, None),
            max_doublings=self.take(
                table, "uniform", "max_doublings", v.ensure_nonnegative_int, int(self._default("uniform", "max_doublings", 6))
            ),
        )

    def _equi(self, table: Mapping[str, Any]) -> EquiSpec:
        return EquiSpec(
            s_values=self.take(table, "equi", "s_values", self._optional_float_tuple, ()),
            t_values=self.take(table, "equi", "t_values", self._optional_float_tuple, ()),
        )

    def _bounds(self, table: Mapping[str, Any]) -> BoundsSpec:
        v = self.v
        return BoundsSpec(
            trials=self.take(table, "bounds", "trials", v.ensure_positive_int, int(self._default("bounds", "trials", 100))),
            horizon=self.take(
                table, "bounds", "horizon", v.ensure_positive_float, float(self._default("bounds", "horizon", 100.0))
            ),
            difference_horizon=self.take(table, "bounds", "difference_horizon", v.ensure_positive_float, 5.0),
            stride=self.take(table, "bounds", "stride", v.ensure_positive_float, float(self._default("bounds", "stride", 0.01))),
            max_initial_norm=self.take(
                table, "bounds", "max_initial_norm", v.ensure_positive_float,
                float(self._default("bounds", "max_initial_norm", 50.0)),
            ),
            perturbation=self.take(table, "bounds", "perturbation", v.ensure_nonnegative_float, 0.1),
        )

    def _nse(self, table: Mapping[str, Any]) -> NseSpec:
        v = self.v

        def positives(value: Any, name: str) -> tuple[float, ...]:
            values = self._optional_float_tuple(value, name)
            return tuple(v.ensure_positive_float(item, f"{name}[{i}]") for i, item in enumerate(values))

        def sample_count(value: Any, name: str) -> int:
            count = v.ensure_positive_int(value, name)
            if count < 2:
                raise ValueError(f"{name} must be at least 2, got {count}")
            return count

        return NseSpec(
            kmax=self.take(table, "nse", "kmax", v.ensure_positive_int, int(self._default("nse", "kmax", 8))),
            trajectories=self.take(table, "nse", "trajectories", v.ensure_positive_int, 20),
            u0_norm=self.take(table, "nse", "u0_norm", v.ensure_nonnegative_float, 5.0),
            kcut=self.take(table, "nse", "kcut", v.ensure_positive_int, 2),
            horizon=self.take(table, "nse", "horizon", v.ensure_positive_float, 5.0),
            samples=self.take(table, "nse", "samples", sample_count, 501),
            rescale_nus=self.take(table, "nse", "rescale_nus", positives, ()),
            c0=self.take(table, "nse", "c0", v.ensure_positive_float, None),
            enstrophy_radius=self.take(table, "nse", "enstrophy_radius", v.ensure_positive_float, None),
        )
