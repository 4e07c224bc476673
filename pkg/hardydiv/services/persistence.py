"""
Report persistence service.

Supports:
- Local files: JSON reports, CSV sweep tables, grid function and field exports

Reports carry no timestamps and are written with sorted keys, so identical
run configs produce identical bytes.
"""

import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from hardydiv.core.config import Settings, get_settings
from hardydiv.core.errors import DataError
from hardydiv.core.logging import get_logger
from hardydiv.decomposition.grid import GridFunction
from hardydiv.decomposition.io import write_grid_csv, write_grid_npz
from hardydiv.domain.report import SweepReport
from hardydiv.solver.staggered import StaggeredField

logger = get_logger("persistence")

FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings "inf", "-inf", "nan"."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def dumps_report(data: dict[str, Any]) -> str:
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2, allow_nan=False) + "\n"


class ReportStore(ABC):
    """Abstract base class for report stores."""

    @abstractmethod
    def save_report(self, report: SweepReport) -> Path:
        """Save a report and its flat row table."""
        pass

    @abstractmethod
    def load_report(self, run_id: str) -> Optional[dict[str, Any]]:
        """Load a report by run_id."""
        pass

    @abstractmethod
    def list_reports(self, limit: int = 10) -> list[str]:
        """List stored run ids."""
        pass

    @abstractmethod
    def save_grid_function(self, f: GridFunction, name: str, *, binary: bool = False) -> Path:
        """Export a grid function as CSV, or as .npz when `binary`."""
        pass

    @abstractmethod
    def save_field(self, field: StaggeredField, name: str) -> Path:
        """Export a staggered field as CSV (component, x, y, value)."""
        pass


class FileReportStore(ReportStore):
    """
    Directory-backed report store.

    <root>/<run_id>.json   full report
    <root>/<run_id>.csv    one flat line per sweep row
    <root>/<name>.csv|npz  grid function and field exports
    """

    def __init__(
        self,
        root: Optional[Union[str, Path]] = None,
        settings: Optional[Settings] = None,
    ):
        settings = settings or get_settings()
        self.root = Path(root or settings.output_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Initialized file report store: {self.root}")

    def save_report(self, report: SweepReport) -> Path:
        path = self.root / f"{report.run_id}.json"
        path.write_text(dumps_report(report.to_dict()), encoding="utf-8")
        if report.rows:
            frame = pd.DataFrame([to_jsonable(row.to_flat()) for row in report.rows])
            frame.to_csv(
                self.root / f"{report.run_id}.csv",
                index=False,
                float_format=FLOAT_FORMAT,
                lineterminator="\n",
            )
        logger.info(f"Saved report: {path}")
        return path

    def load_report(self, run_id: str) -> Optional[dict[str, Any]]:
        path = self.root / f"{run_id}.json"
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise DataError(f"Corrupt report {path}: {e}") from e

    def list_reports(self, limit: int = 10) -> list[str]:
        return sorted(p.stem for p in self.root.glob("run_*.json"))[:limit]

    def save_grid_function(self, f: GridFunction, name: str, *, binary: bool = False) -> Path:
        if binary:
            return write_grid_npz(f, self.root / f"{name}.npz")
        return write_grid_csv(f, self.root / f"{name}.csv")

    def save_field(self, field: StaggeredField, name: str) -> Path:
        path = self.root / f"{name}.csv"
        field.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return path


def create_report_store(
    root: Optional[Union[str, Path]] = None,
    settings: Optional[Settings] = None,
) -> ReportStore:
    """Factory function to create the report store."""
    return FileReportStore(root, settings)
