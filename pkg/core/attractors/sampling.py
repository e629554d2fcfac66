from __future__ import annotations

import numpy as np
from scipy.stats import norm, qmc

from core.geometry.point_cloud import PointCloud

DEFAULT_POINTS_1D = 1024
DEFAULT_POINTS_3D = 4096
_PPF_CLIP = 1e-12


def sample_ball(dim: int, radius: float, n_points: int, seed: int = 0, center=None) -> PointCloud:
    """
    Low-discrepancy sample of the closed ball of ``radius`` in R^dim.

    A scrambled Sobol sequence in dim + 1 coordinates is mapped to a
    direction (Gaussian quantiles, normalized) and a radius R * u^(1/dim),
    which is uniform in volume. The same seed always gives the same cloud.
    """
    if dim <= 0 or n_points <= 0:
        raise ValueError("dim and n_points must be positive")
    if not radius > 0.0:
        raise ValueError(f"radius must be positive, got {radius!r}")

    engine = qmc.Sobol(d=dim + 1, scramble=True, seed=seed)
    draws = engine.random_base2(int(np.ceil(np.log2(n_points))))[:n_points]
    gaussian = norm.ppf(np.clip(draws[:, :dim], _PPF_CLIP, 1.0 - _PPF_CLIP))
    lengths = np.linalg.norm(gaussian, axis=1)
    lengths[lengths == 0.0] = 1.0
    radii = radius * draws[:, dim] ** (1.0 / dim)
    points = gaussian / lengths[:, None] * radii[:, None]
    if center is not None:
        points = points + np.asarray(center, dtype=np.float64)
    return PointCloud(points)


def sample_interval(low: float, high: float, n_points: int) -> PointCloud:
    """Evenly spaced points on [low, high], endpoints included."""
    if not high > low:
        raise ValueError(f"interval needs low < high, got [{low}, {high}]")
    if n_points < 2:
        raise ValueError("an interval sample needs at least two points")
    return PointCloud(np.linspace(low, high, n_points).reshape(-1, 1))
