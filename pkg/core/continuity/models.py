from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence, Union

import pandas as pd

from core.attractors.models import AttractorSection, UniformAttractorApprox
from core.geometry.point_cloud import DistancePair, PointCloud
from core.process.process import ParameterPoint

AttractorApprox = Union[AttractorSection, UniformAttractorApprox]


@dataclass(slots=True)
class SweepError(Exception):
    code: str
    details: str = ""

    def __str__(self) -> str:
        return f"{self.code}: {self.details}" if self.details else self.code


@dataclass(slots=True)
class EquiAttractionError(Exception):
    code: str
    details: str = ""

    def __str__(self) -> str:
        return f"{self.code}: {self.details}" if self.details else self.code


@dataclass(frozen=True, slots=True)
class ParameterGrid:
    """
    Cartesian product of sorted axes, enumerated row-major (last axis
    fastest). Parameters in ``fixed`` are shared by every grid point.
    """

    axes: tuple[tuple[str, tuple[float, ...]], ...]
    fixed: ParameterPoint = ParameterPoint()

    def __post_init__(self):
        axes = tuple((str(name), tuple(float(v) for v in values)) for name, values in self.axes)
        if not axes:
            raise ValueError("a parameter grid needs at least one axis")
        names = [name for name, _ in axes]
        if len(set(names)) != len(names):
            raise ValueError(f"grid axis names must be unique, got {names}")
        for name, values in axes:
            if not values:
                raise ValueError(f"grid axis {name} has no values")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"grid axis {name} must be strictly increasing")
            if name in self.fixed:
                raise ValueError(f"parameter {name} is both a grid axis and fixed")
        object.__setattr__(self, "axes", axes)

    @classmethod
    def of(cls, fixed: Mapping[str, float] | None = None, **axes: Sequence[float]) -> ParameterGrid:
        return cls(tuple((name, tuple(values)) for name, values in axes.items()), ParameterPoint.from_dict(fixed or {}))

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(values) for _, values in self.axes)

    @property
    def size(self) -> int:
        total = 1
        for extent in self.shape:
            total *= extent
        return total

    @property
    def points(self) -> list[ParameterPoint]:
        return [self._point(combo) for combo in itertools.product(*(values for _, values in self.axes))]

    def _point(self, combo: Iterable[float]) -> ParameterPoint:
        return ParameterPoint(tuple(zip(self.axis_names, combo)) + self.fixed.coords)

    def multi_index(self, index: int) -> tuple[int, ...]:
        result = []
        for extent in reversed(self.shape):
            index, position = divmod(index, extent)
            result.append(position)
        return tuple(reversed(result))

    def flat_index(self, multi: Sequence[int]) -> int:
        index = 0
        for position, extent in zip(multi, self.shape):
            index = index * extent + position
        return index

    def index_of(self, point: ParameterPoint) -> int:
        for index, candidate in enumerate(self.points):
            if candidate == point:
                return index
        raise ValueError(f"[{point.label()}] is not a point of the grid")

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """Index pairs one step apart along exactly one axis, in row-major order."""
        pairs = []
        for index in range(self.size):
            multi = self.multi_index(index)
            for axis, extent in enumerate(self.shape):
                if multi[axis] + 1 < extent:
                    neighbour = list(multi)
                    neighbour[axis] += 1
                    pairs.append((index, self.flat_index(neighbour)))
        return sorted(pairs)

    def all_pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.size), 2))

    def to_dict(self) -> dict[str, Any]:
        return {"axes": {name: list(values) for name, values in self.axes}, "fixed": self.fixed.to_dict()}


@dataclass(slots=True)
class SweepResult:
    """Attractor approximations per grid index plus distances between grid neighbours."""

    grid: ParameterGrid
    t: float | None
    sections: dict[int, AttractorApprox] = field(default_factory=dict)
    pairwise: dict[tuple[int, int], DistancePair] = field(default_factory=dict)
    failures: dict[int, str] = field(default_factory=dict)

    def cloud(self, index: int) -> PointCloud:
        return self.sections[index].cloud

    def require(self, point: ParameterPoint) -> int:
        index = self.grid.index_of(point)
        if index not in self.sections:
            raise ValueError(f"no attractor approximation at [{point.label()}]: {self.failures.get(index, 'missing')}")
        return index

    def summary_frame(self) -> pd.DataFrame:
        """One row per computed pair: both points' axis coordinates and the distances."""
        names = self.grid.axis_names
        columns = [f"{name}_a" for name in names] + [f"{name}_b" for name in names] + ["forward", "backward", "symmetric"]
        points = self.grid.points
        rows = []
        for (i, j), pair in sorted(self.pairwise.items()):
            row = [points[i][name] for name in names] + [points[j][name] for name in names]
            rows.append(row + [pair.forward, pair.backward, pair.symmetric])
        return pd.DataFrame(rows, columns=columns)


@dataclass(slots=True)
class EquiAttractionReport:
    """
    Sup over the grid of the attraction distance for each start time s
    (pullback) or elapsed time t (uniform). ``per_lambda`` rows are
    (variable value, grid index, distance).
    """

    t: float | None
    variable: str
    values: list[float] = field(default_factory=list)
    rates: list[float] = field(default_factory=list)
    argmax: list[ParameterPoint] = field(default_factory=list)
    per_lambda: list[tuple[float, int, float]] = field(default_factory=list)
    axis_names: tuple[str, ...] = ()

    @property
    def s_values(self) -> list[float]:
        return self.values

    def to_frame(self) -> pd.DataFrame:
        columns = [self.variable, "sup_rate"] + [f"argmax_{name}" for name in self.axis_names]
        rows = [
            [value, rate] + [point[name] for name in self.axis_names]
            for value, rate, point in zip(self.values, self.rates, self.argmax)
        ]
        return pd.DataFrame(rows, columns=columns)


@dataclass(frozen=True, slots=True)
class MonotoneCheck:
    monotone: bool
    first_violation: int | None = None

    def __bool__(self) -> bool:
        return self.monotone
