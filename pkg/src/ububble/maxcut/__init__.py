"""Exact MaxCut on bubble models."""

from ._kernels import BACKEND
from .dp import (
    BorderCut,
    ColumnRef,
    HeavyPart,
    HeavyPartition,
    PartSolver,
    border_cuts,
    crossing,
    default_threshold,
    heavy_part_maxcut,
    light_pair_value,
    partition_heavy,
)
from .solve import (
    FLAWED_CLAIM,
    SweepStats,
    TooLarge,
    counterexample,
    counterexample_model,
    maxcut,
    maxcut_bounded_columns,
    maxcut_bruteforce,
)

__all__ = [
    "BACKEND",
    "BorderCut",
    "ColumnRef",
    "FLAWED_CLAIM",
    "HeavyPart",
    "HeavyPartition",
    "PartSolver",
    "SweepStats",
    "TooLarge",
    "border_cuts",
    "counterexample",
    "counterexample_model",
    "crossing",
    "default_threshold",
    "heavy_part_maxcut",
    "light_pair_value",
    "maxcut",
    "maxcut_bounded_columns",
    "maxcut_bruteforce",
    "partition_heavy",
]
