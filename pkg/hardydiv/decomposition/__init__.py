"""Zero-mean decomposition of grid functions subordinate to the cusp strips."""

from hardydiv.decomposition.engine import (
    Decomposition,
    correction_hardy_check,
    decompose,
    decomposition_bound,
    decomposition_constant,
)
from hardydiv.decomposition.grid import ColumnLayout, CompositeGrid, GridFunction
from hardydiv.decomposition.io import read_grid_csv, read_grid_npz, write_grid_csv, write_grid_npz
from hardydiv.decomposition.library import LIBRARY, LIBRARY_VERSION, library_function, random_zero_mean
from hardydiv.decomposition.partition import PartitionOfUnity, build_partition_of_unity

__all__ = [
    "LIBRARY",
    "LIBRARY_VERSION",
    "ColumnLayout",
    "CompositeGrid",
    "Decomposition",
    "GridFunction",
    "PartitionOfUnity",
    "build_partition_of_unity",
    "correction_hardy_check",
    "decompose",
    "decomposition_bound",
    "decomposition_constant",
    "library_function",
    "random_zero_mean",
    "read_grid_csv",
    "read_grid_npz",
    "write_grid_csv",
    "write_grid_npz",
]
