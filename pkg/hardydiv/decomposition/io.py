"""
GridFunction import and export.

CSV: one row per active cell, columns i (grid column), cell_x, cell_y, value,
area, floats written with 17 significant digits. The CSV carries no grid
parameters, so reading it needs the grid it was written from.

NPZ: arrays format (int, currently 1), gamma (float64), shape (int64
[n_columns, n1, n2]) and values (float64, one per active cell in grid order).
The binary form round-trips bit-exactly.
"""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from hardydiv.core.errors import DataError, ShapeError
from hardydiv.core.logging import get_logger
from hardydiv.decomposition.grid import CompositeGrid, GridFunction

logger = get_logger("decomposition.io")

CSV_COLUMNS = ["i", "cell_x", "cell_y", "value", "area"]
NPZ_FORMAT = 1

PathLike = Union[str, Path]


def grid_function_frame(f: GridFunction) -> pd.DataFrame:
    cx, cy = f.grid.centroids
    return pd.DataFrame(
        {
            "i": f.grid.column_index,
            "cell_x": cx,
            "cell_y": cy,
            "value": f.values,
            "area": f.grid.areas,
        },
        columns=CSV_COLUMNS,
    )


def write_grid_csv(f: GridFunction, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid_function_frame(f).to_csv(path, index=False, float_format="%.17g")
    return path


def read_grid_csv(path: PathLike, grid: CompositeGrid) -> GridFunction:
    """Read values written by write_grid_csv; cell order and areas must match the grid."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"Grid function file not found: {path}", details={"path": str(path)})
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"Grid function CSV {path} lacks columns {missing}")
    if len(frame) != grid.n_cells:
        raise ShapeError(
            f"CSV has {len(frame)} cells, grid has {grid.n_cells}",
            details={"expected": grid.n_cells, "got": len(frame)},
        )
    if not np.array_equal(frame["i"].to_numpy(), grid.column_index) or not np.allclose(
        frame["area"].to_numpy(dtype=float), grid.areas, rtol=1e-14, atol=0.0
    ):
        raise ShapeError(f"Cell layout of {path} does not match the grid", details=grid.to_dict())
    return GridFunction(grid, frame["value"].to_numpy(dtype=float))


def write_grid_npz(f: GridFunction, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid = f.grid
    with path.open("wb") as handle:
        np.savez(
            handle,
            format=np.array(NPZ_FORMAT),
            gamma=np.array(grid.gamma, dtype=np.float64),
            shape=np.array([grid.n_columns, grid.n1, grid.n2], dtype=np.int64),
            values=f.values.astype(np.float64),
        )
    return path


def read_grid_npz(path: PathLike) -> GridFunction:
    path = Path(path)
    if not path.exists():
        raise DataError(f"Grid function file not found: {path}", details={"path": str(path)})
    with np.load(path) as data:
        if int(data["format"]) != NPZ_FORMAT:
            raise DataError(f"Unsupported grid function format {int(data['format'])}")
        n_columns, n1, n2 = (int(v) for v in data["shape"])
        grid = CompositeGrid(gamma=float(data["gamma"]), n_columns=n_columns, n1=n1, n2=n2)
        values = np.array(data["values"], dtype=np.float64)
    logger.debug(f"Read grid function {path.name}: {values.size} cells")
    return GridFunction(grid, values)
