from __future__ import annotations

from pathlib import Path

import pandas as pd

from core.geometry.point_cloud import GeometryError, PointCloud

CSV_FLOAT_FORMAT = "%.17g"


def cloud_columns(dim: int) -> list[str]:
    """Return the CSV header for a cloud of the given dimension."""
    return [f"x{index}" for index in range(dim)]


def cloud_to_frame(cloud: PointCloud) -> pd.DataFrame:
    return pd.DataFrame(cloud.points, columns=cloud_columns(cloud.dim))


def write_cloud_csv(cloud: PointCloud, path: str | Path) -> Path:
    """Write one point per row, header ``x0,...``, 17 significant digits."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    cloud_to_frame(cloud).to_csv(target, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return target


def read_cloud_csv(path: str | Path, resolution: float = 0.0) -> PointCloud:
    """
    Read a point-cloud CSV written by :func:`write_cloud_csv`.

    :raises GeometryError: ``invalid_csv`` if the header is not ``x0..x{d-1}``,
        ``empty_cloud`` if there are no rows.
    """
    source = Path(path)
    try:
        frame = pd.read_csv(source, float_precision="round_trip")
    except pd.errors.EmptyDataError as e:
        raise GeometryError("invalid_csv", f"{source} is empty") from e

    columns = [str(column) for column in frame.columns]
    if not columns or columns != cloud_columns(len(columns)):
        raise GeometryError("invalid_csv", f"{source}: unexpected header {columns}")
    if frame.empty:
        raise GeometryError("empty_cloud", str(source))
    return PointCloud(frame.to_numpy(dtype="float64"), resolution=resolution)
