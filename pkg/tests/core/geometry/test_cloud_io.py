from __future__ import annotations

import numpy as np
import pytest

from core.geometry.cloud_io import cloud_columns, read_cloud_csv, write_cloud_csv
from core.geometry.point_cloud import GeometryError, PointCloud


def test_cloud_csv_preserves_coordinates_exactly(tmp_path):
    cloud = PointCloud(np.random.default_rng(1).normal(size=(25, 3)))

    path = write_cloud_csv(cloud, tmp_path / "nested" / "cloud.csv")
    loaded = read_cloud_csv(path)

    assert path.read_text(encoding="utf-8").splitlines()[0] == "x0,x1,x2"
    assert loaded == cloud


def test_cloud_columns_are_numbered_from_zero():
    assert cloud_columns(2) == ["x0", "x1"]


def test_read_cloud_rejects_unexpected_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")

    with pytest.raises(GeometryError) as exc_info:
        read_cloud_csv(path)

    assert exc_info.value.code == "invalid_csv"


def test_read_cloud_rejects_header_without_rows(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("x0,x1\n", encoding="utf-8")

    with pytest.raises(GeometryError) as exc_info:
        read_cloud_csv(path)

    assert exc_info.value.code == "empty_cloud"


def test_read_cloud_rejects_empty_file(tmp_path):
    path = tmp_path / "blank.csv"
    path.write_text("", encoding="utf-8")

    with pytest.raises(GeometryError) as exc_info:
        read_cloud_csv(path)

    assert exc_info.value.code == "invalid_csv"
