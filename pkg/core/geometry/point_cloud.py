from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

DistanceMethod = Literal["auto", "brute", "kdtree"]

# Below this many point pairs the brute-force scan beats building a tree.
BRUTE_FORCE_PAIR_LIMIT = 250_000
_BRUTE_CHUNK_PAIRS = 1_000_000
_CANDIDATE_SLACK = 1e-9


@dataclass(slots=True)
class GeometryError(Exception):
    """Domain error raised for malformed point clouds or incompatible operands."""

    code: str
    details: str = ""

    def __str__(self) -> str:
        return f"{self.code}: {self.details}" if self.details else self.code


@dataclass(frozen=True, slots=True, eq=False)
class PointCloud:
    """
    Finite sample of a non-empty compact subset of R^dim.

    Points are stored as a read-only ``(n, dim)`` float64 array sorted
    lexicographically by coordinates, so two clouds holding the same points
    compare equal and serialize identically. ``resolution`` is the merge
    radius the cloud was deduplicated with (0 when it never was).
    """

    points: np.ndarray
    resolution: float = 0.0

    def __post_init__(self):
        array = np.array(self.points, dtype=np.float64, copy=True)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if array.ndim != 2 or array.shape[1] == 0:
            raise GeometryError("dimension_mismatch", f"expected (n, dim) array, got shape {array.shape}")
        if array.shape[0] == 0:
            raise GeometryError("empty_cloud")
        if not np.all(np.isfinite(array)):
            raise GeometryError("non_finite", "cloud contains NaN or infinite coordinates")
        resolution = float(self.resolution)
        if not np.isfinite(resolution) or resolution < 0.0:
            raise ValueError(f"resolution must be a non-negative finite number, got {self.resolution!r}")

        order = np.lexsort(array.T[::-1])
        array = np.ascontiguousarray(array[order])
        array.setflags(write=False)
        object.__setattr__(self, "points", array)
        object.__setattr__(self, "resolution", resolution)

    @classmethod
    def singleton(cls, point: Iterable[float]) -> PointCloud:
        """Return the one-point cloud {point}."""
        return cls(np.asarray(list(point), dtype=np.float64).reshape(1, -1))

    @classmethod
    def union(cls, *clouds: PointCloud) -> PointCloud:
        """Return the union of clouds (exact duplicates kept, resolution reset to 0)."""
        if not clouds:
            raise GeometryError("empty_cloud", "union of zero clouds")
        _require_same_dim(*clouds)
        return cls(np.concatenate([cloud.points for cloud in clouds], axis=0))

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.resolution == other.resolution and np.array_equal(self.points, other.points)

    __hash__ = None

    def diameter(self) -> float:
        """Largest pairwise Euclidean distance (0 for a single point)."""
        if len(self) < 2:
            return 0.0
        chunk = max(1, _BRUTE_CHUNK_PAIRS // len(self))
        best = 0.0
        for start in range(0, len(self), chunk):
            block = cdist(self.points[start:start + chunk], self.points)
            best = max(best, float(block.max()))
        return best

    def norms(self) -> np.ndarray:
        """Euclidean norm of every point."""
        return np.sqrt(_squared_norms(self.points))

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)}, dim={self.dim}, resolution={self.resolution:g})"


@dataclass(frozen=True, slots=True)
class DistancePair:
    """Both directed Hausdorff semi-distances and their maximum."""

    forward: float
    backward: float
    symmetric: float

    def __post_init__(self):
        for name in ("forward", "backward", "symmetric"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be non-negative and finite, got {value!r}")
        if self.symmetric != max(self.forward, self.backward):
            raise ValueError("symmetric must equal max(forward, backward)")

    @classmethod
    def from_directed(cls, forward: float, backward: float) -> DistancePair:
        return cls(float(forward), float(backward), float(max(forward, backward)))

    def to_dict(self) -> dict[str, float]:
        return {"forward": self.forward, "backward": self.backward, "symmetric": self.symmetric}


def _require_same_dim(*clouds: PointCloud):
    dims = {cloud.dim for cloud in clouds}
    if len(dims) > 1:
        raise GeometryError("dimension_mismatch", f"clouds have dimensions {sorted(dims)}")


def _squared_norms(points: np.ndarray) -> np.ndarray:
    acc = points[:, 0] * points[:, 0]
    for j in range(1, points.shape[1]):
        acc = acc + points[:, j] * points[:, j]
    return acc


def _pair_squared(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """
    Squared distances accumulated coordinate by coordinate.

    Both distance paths go through this function, so a given pair always
    yields the same float regardless of how it was found.
    """
    diff = a[..., 0] - c[..., 0]
    acc = diff * diff
    for j in range(1, a.shape[-1]):
        diff = a[..., j] - c[..., j]
        acc = acc + diff * diff
    return acc


def _nearest_squared_brute(a_points: np.ndarray, c_points: np.ndarray) -> np.ndarray:
    m = c_points.shape[0]
    chunk = max(1, _BRUTE_CHUNK_PAIRS // m)
    out = np.empty(a_points.shape[0], dtype=np.float64)
    for start in range(0, a_points.shape[0], chunk):
        block = a_points[start:start + chunk]
        out[start:start + chunk] = _pair_squared(block[:, None, :], c_points[None, :, :]).min(axis=1)
    return out


def _nearest_squared_kdtree(a_points: np.ndarray, c_points: np.ndarray) -> np.ndarray:
    tree = cKDTree(c_points)
    approx, _ = tree.query(a_points, k=1)
    radii = approx * (1.0 + _CANDIDATE_SLACK) + np.finfo(np.float64).tiny
    candidates = tree.query_ball_point(a_points, radii)

    counts = np.fromiter((len(c) for c in candidates), dtype=np.int64, count=len(candidates))
    rows = np.repeat(np.arange(a_points.shape[0]), counts)
    cols = np.fromiter((j for c in candidates for j in c), dtype=np.int64, count=int(counts.sum()))

    best = np.full(a_points.shape[0], np.inf)
    np.minimum.at(best, rows, _pair_squared(a_points[rows], c_points[cols]))
    return best


def _resolve_method(method: DistanceMethod, n: int, m: int) -> str:
    if method == "auto":
        return "brute" if n * m <= BRUTE_FORCE_PAIR_LIMIT else "kdtree"
    if method not in ("brute", "kdtree"):
        raise ValueError(f"Unknown distance method: {method!r}")
    return method


def semi_distance(a: PointCloud, c: PointCloud, method: DistanceMethod = "auto") -> float:
    """
    Hausdorff semi-distance sup_{x in a} inf_{y in c} |x - y|.

    Exact for the finite clouds. The ``kdtree`` path uses the tree only to
    shortlist candidates and recomputes them with the brute-force formula, so
    every method returns the same float.
    """
    _require_same_dim(a, c)
    resolved = _resolve_method(method, len(a), len(c))
    if resolved == "brute":
        squared = _nearest_squared_brute(a.points, c.points)
    else:
        squared = _nearest_squared_kdtree(a.points, c.points)
    return float(np.sqrt(squared.max()))


def hausdorff(a: PointCloud, c: PointCloud, method: DistanceMethod = "auto") -> DistancePair:
    """Directed semi-distances in both directions plus the symmetric Hausdorff distance."""
    return DistancePair.from_directed(semi_distance(a, c, method), semi_distance(c, a, method))


def merge_dedup(cloud: PointCloud, radius: float) -> PointCloud:
    """
    Thin a cloud so no two retained points lie within ``radius``.

    Greedy first-wins walk in the stored (sorted) order: a point is kept
    unless an already kept point lies within ``radius`` of it. The result
    is a subset of the input with semi_distance(cloud, result) <= radius.
    """
    radius = float(radius)
    if not np.isfinite(radius) or radius < 0.0:
        raise ValueError(f"merge radius must be non-negative, got {radius!r}")

    if radius == 0.0:
        return PointCloud(np.unique(cloud.points, axis=0), resolution=0.0)

    points = cloud.points
    tree = cKDTree(points)
    suppressed = np.zeros(points.shape[0], dtype=bool)
    kept: list[int] = []
    for index in range(points.shape[0]):
        if suppressed[index]:
            continue
        kept.append(index)
        suppressed[tree.query_ball_point(points[index], radius)] = True
    return PointCloud(points[kept], resolution=radius)
