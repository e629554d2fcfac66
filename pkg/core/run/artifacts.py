from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pandas as pd

from core.attractors.models import AttractorSection, UniformAttractorApprox
from core.geometry.cloud_io import CSV_FLOAT_FORMAT, read_cloud_csv, write_cloud_csv
from core.geometry.point_cloud import GeometryError, PointCloud
from core.process.process import ParameterPoint


@dataclass(slots=True)
class ArtifactError(Exception):
    """Domain error raised when an artifact cannot be written or found."""

    code: str
    details: str = ""

    def __str__(self) -> str:
        return f"{self.code}: {self.details}" if self.details else self.code


def _jsonable(value: Any) -> Any:
    """Replace non-finite floats by None so sidecars stay valid JSON."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def _inf_if_none(value: float | None) -> float:
    return float("inf") if value is None else float(value)


class ArtifactStore:
    """
    Writes and reads run outputs below one root directory.

    Clouds and tables are CSV (pandas, 17 significant digits, ``\\n`` line
    endings); metadata sidecars are JSON with sorted keys and two-space
    indent. Nothing written here depends on wall-clock time.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, relative: str | Path) -> Path:
        return self.root / relative

    def _require(self, relative: str | Path) -> Path:
        target = self.path(relative)
        if not target.is_file():
            raise ArtifactError("missing_artifact", str(target))
        return target

    # ---------------------------
    # Writing
    # ---------------------------
    def write_json(self, relative: str | Path, payload: dict[str, Any]) -> Path:
        target = self.path(relative)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="\n") as handle:
                json.dump(_jsonable(payload), handle, indent=2, sort_keys=True, ensure_ascii=True, allow_nan=False)
                handle.write("\n")
        except OSError as exc:
            raise ArtifactError("write_failed", f"{target}: {exc}") from exc
        return target

    def write_frame(self, relative: str | Path, frame: pd.DataFrame) -> Path:
        target = self.path(relative)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(target, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        except OSError as exc:
            raise ArtifactError("write_failed", f"{target}: {exc}") from exc
        return target

    def write_cloud(self, relative: str | Path, cloud: PointCloud) -> Path:
        try:
            return write_cloud_csv(cloud, self.path(relative))
        except OSError as exc:
            raise ArtifactError("write_failed", f"{self.path(relative)}: {exc}") from exc

    def write_section(self, stem: str, section: AttractorSection, extra: dict[str, Any] | None = None) -> list[Path]:
        """``<stem>.csv`` plus the ``<stem>.json`` sidecar."""
        meta = section.to_dict() | (extra or {})
        return [self.write_cloud(f"{stem}.csv", section.cloud), self.write_json(f"{stem}.json", meta)]

    def write_uniform(self, stem: str, uniform: UniformAttractorApprox, extra: dict[str, Any] | None = None) -> list[Path]:
        meta = uniform.to_dict() | (extra or {})
        return [self.write_cloud(f"{stem}.csv", uniform.cloud), self.write_json(f"{stem}.json", meta)]

    # ---------------------------
    # Reading
    # ---------------------------
    def read_json(self, relative: str | Path) -> dict[str, Any]:
        target = self._require(relative)
        with open(target, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        if not isinstance(payload, dict):
            raise ArtifactError("invalid_artifact", f"{target} is not a JSON object")
        return payload

    def read_frame(self, relative: str | Path) -> pd.DataFrame:
        return pd.read_csv(self._require(relative), float_precision="round_trip")

    def _read_cloud(self, relative: str, resolution: float) -> PointCloud:
        try:
            return read_cloud_csv(self._require(relative), resolution)
        except GeometryError as exc:
            raise ArtifactError("invalid_artifact", str(exc)) from exc

    @staticmethod
    def _check_lambda(meta: dict[str, Any], lam: ParameterPoint, stem: str):
        if meta.get("lambda") != lam.to_dict():
            raise ArtifactError("stale_artifact", f"{stem} was computed for {meta.get('lambda')}, expected {lam.to_dict()}")

    def read_section(self, stem: str, lam: ParameterPoint) -> AttractorSection:
        """Rebuild a section written by :meth:`write_section` for parameter point ``lam``."""
        meta = self.read_json(f"{stem}.json")
        self._check_lambda(meta, lam, stem)
        return AttractorSection(
            t=float(meta["t"]),
            lam=lam,
            cloud=self._read_cloud(f"{stem}.csv", float(meta.get("resolution", 0.0))),
            s_converged=float(meta["s_converged"]),
            history=[(float(entry["s"]), _inf_if_none(entry["delta"])) for entry in meta.get("history", [])],
            converged=bool(meta["converged"]),
            to_final=[float(value) for value in meta.get("to_final", [])],
        )

    def read_uniform(self, stem: str, lam: ParameterPoint) -> UniformAttractorApprox:
        meta = self.read_json(f"{stem}.json")
        self._check_lambda(meta, lam, stem)
        return UniformAttractorApprox(
            lam=lam,
            cloud=self._read_cloud(f"{stem}.csv", float(meta.get("resolution", 0.0))),
            t_window=float(meta["t_window"]),
            s_grid=tuple(float(s) for s in meta["s_grid"]),
            history=[(float(entry["t"]), _inf_if_none(entry["delta"])) for entry in meta.get("history", [])],
            converged=bool(meta["converged"]),
        )
