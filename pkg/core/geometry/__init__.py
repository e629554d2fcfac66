from .cloud_io import read_cloud_csv, write_cloud_csv
from .point_cloud import (
    DistancePair,
    GeometryError,
    PointCloud,
    hausdorff,
    merge_dedup,
    semi_distance,
)

__all__ = [
    "DistancePair",
    "GeometryError",
    "PointCloud",
    "hausdorff",
    "merge_dedup",
    "read_cloud_csv",
    "semi_distance",
    "write_cloud_csv",
]
