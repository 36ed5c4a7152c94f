"""
Data models for parametrized IFS families and parameter scans
"""
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class ParamFamily(BaseModel):
    """A registered family t -> Phi_t over an axis-aligned parameter box"""
    model_config = ConfigDict(frozen=True)

    family_id: str = Field(..., description="Registered family identifier")
    lower: List[float] = Field(..., min_length=1, description="Lower corner of the domain box")
    upper: List[float] = Field(..., min_length=1, description="Upper corner of the domain box")
    constants: Dict[str, Any] = Field(default_factory=dict, description="Fixed family data")

    @model_validator(mode="after")
    def _check(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("domain corners must have the same length")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("domain box is empty")
        return self

    @property
    def m(self) -> int:
        return len(self.lower)

    def contains(self, t: Sequence[float], margin: float = 0.0) -> bool:
        t = np.asarray(t, dtype=float)
        if t.shape != (self.m,):
            return False
        return bool(np.all(t >= np.asarray(self.lower) + margin) and np.all(t <= np.asarray(self.upper) - margin))


class CoverCell(BaseModel):
    """One grid cell of an exceptional-set cover"""
    index: List[int]
    center: List[float]
    min_distance: float
    hit: bool


class CoverReport(BaseModel):
    """Grid cells where some pair of level-n compositions nearly coincides"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    epsilon: float
    grid_step: float
    hit_count: int
    grid_cells: int
    bound: float = Field(..., description="|Lambda|^(2n) times the reference covering count")
    rank: int
    cells: List[CoverCell]

    @property
    def hit_fraction(self) -> float:
        return self.hit_count / self.grid_cells if self.grid_cells else 0.0

    def summary_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "grid_step": self.grid_step,
            "grid_cells": self.grid_cells,
            "hit_count": self.hit_count,
            "hit_fraction": self.hit_fraction,
            "rank": self.rank,
            "bound": self.bound,
        }


class ScanRow(BaseModel):
    """Diagnostics of one grid point"""
    index: int
    params: List[float]
    values: Dict[str, Optional[float]] = Field(default_factory=dict)
    error: str = ""

    def to_row(self, columns: Sequence[str]) -> Dict[str, Any]:
        row: Dict[str, Any] = {"index": self.index}
        for j, value in enumerate(self.params):
            row[f"t{j + 1}"] = value
        for column in columns:
            row[column] = self.values.get(column)
        row["error"] = self.error
        return row
