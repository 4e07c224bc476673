"""Two-column CSV ingestion for tabulated weights."""

from pathlib import Path
from typing import Union

import pandas as pd

from hardydiv.core.errors import DataError
from hardydiv.core.logging import get_logger
from hardydiv.domain.models import WeightSpec
from hardydiv.weights.catalog import tabulated_weight

logger = get_logger("weights.tabulated")

COLUMNS = ("x1", "omega")


def load_weight_csv(path: Union[str, Path]) -> WeightSpec:
    """
    Read (x1, omega) samples.

    A header row naming the columns is optional; without it the first two
    columns are used in order.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"Weight table not found: {path}", details={"path": str(path)})

    try:
        frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise DataError(f"Could not parse weight table {path}: {e}") from e

    if not set(COLUMNS).issubset(frame.columns):
        frame = pd.read_csv(path, comment="#", header=None, float_precision="round_trip")
        if frame.shape[1] < 2:
            raise DataError(
                f"Weight table {path} needs two columns (x1, omega)",
                details={"columns": [str(c) for c in frame.columns]},
            )
        frame = frame.iloc[:, :2]
        frame.columns = list(COLUMNS)

    try:
        x1 = pd.to_numeric(frame["x1"]).to_numpy(dtype=float)
        omega = pd.to_numeric(frame["omega"]).to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise DataError(f"Weight table {path} has non-numeric entries: {e}") from e

    spec = tabulated_weight(x1, omega, label=path.stem)
    logger.info(f"Loaded tabulated weight {path.name} with {len(x1)} samples")
    return spec


def save_weight_csv(spec: WeightSpec, path: Union[str, Path]) -> Path:
    if spec.table_x is None or spec.table_w is None:
        raise DataError("Only tabulated weights can be written as a table")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"x1": spec.table_x, "omega": spec.table_w})
    frame.to_csv(path, index=False, float_format="%.17g")
    return path
