"""
Data models for finitely supported measures
Lattice measures on dyadic grids of R^d, measures on the similarity group and their moments
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.similitude import Similitude

MASS_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class LatticeMeasure(BaseModel):
    """
    Probability measure on the lattice of dyadic cubes of side 2**-L

    Cells are stored as an (N, d) int64 array of cell indices, sorted
    lexicographically and without repetition; weights are positive and sum to 1.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int = Field(..., ge=1, description="Ambient dimension")
    L: int = Field(..., ge=0, le=60, description="Resolution level")
    cells: np.ndarray = Field(..., description="Cell indices, shape (N, d)")
    weights: np.ndarray = Field(..., description="Cell masses, shape (N,)")

    @field_validator("cells", mode="before")
    @classmethod
    def _cells_array(cls, v):
        return _frozen(np.array(v, dtype=np.int64))

    @field_validator("weights", mode="before")
    @classmethod
    def _weights_array(cls, v):
        return _frozen(np.array(v, dtype=float))

    @model_validator(mode="after")
    def _check(self):
        if self.cells.ndim != 2 or self.cells.shape[1] != self.d:
            raise ValueError(f"cells must have shape (N, {self.d})")
        if self.weights.shape != (self.cells.shape[0],):
            raise ValueError("one weight per cell is required")
        if self.cells.shape[0] == 0:
            raise ValueError("a lattice measure needs at least one cell")
        if np.any(self.weights <= 0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be positive and finite")
        if abs(self.weights.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"weights sum to {self.weights.sum()}, expected 1")
        return self

    @property
    def size(self) -> int:
        return int(self.cells.shape[0])

    @property
    def side(self) -> float:
        return float(2.0 ** (-self.L))

    def centers(self) -> np.ndarray:
        """Cell centers (cells + 1/2) * 2**-L"""
        return (self.cells.astype(float) + 0.5) * self.side

    def to_json(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "L": self.L,
            "cells": [[*map(int, c), float(w)] for c, w in zip(self.cells, self.weights)],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "LatticeMeasure":
        d = int(data["d"])
        rows = data["cells"]
        cells = np.array([row[:d] for row in rows], dtype=np.int64).reshape(-1, d)
        weights = np.array([row[d] for row in rows], dtype=float)
        if cells.shape[0]:
            order = np.lexsort(cells.T[::-1])
            cells, weights = cells[order], weights[order]
        return cls(d=d, L=int(data["L"]), cells=cells, weights=weights / weights.sum())


class SimMeasure(BaseModel):
    """Finitely supported probability measure on the similarity group, in array form"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ts: np.ndarray = Field(..., description="Log-contractions, shape (N,)")
    Us: np.ndarray = Field(..., description="Orthogonal parts, shape (N, d, d)")
    As: np.ndarray = Field(..., description="Translations, shape (N, d)")
    weights: np.ndarray = Field(..., description="Atom masses, shape (N,)")
    words: Optional[np.ndarray] = Field(None, description="Composition words (0-based), shape (N, n)")

    @field_validator("ts", "Us", "As", "weights", mode="before")
    @classmethod
    def _float_array(cls, v):
        return _frozen(np.array(v, dtype=float))

    @field_validator("words", mode="before")
    @classmethod
    def _word_array(cls, v):
        return None if v is None else _frozen(np.array(v, dtype=np.int64))

    @model_validator(mode="after")
    def _check(self):
        n_atoms = self.ts.shape[0]
        if n_atoms == 0:
            raise ValueError("a measure on G needs at least one atom")
        if self.As.ndim != 2 or self.As.shape[0] != n_atoms:
            raise ValueError("translations must have shape (N, d)")
        d = self.As.shape[1]
        if self.Us.shape != (n_atoms, d, d) or self.weights.shape != (n_atoms,):
            raise ValueError("inconsistent atom array shapes")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if abs(self.weights.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"weights sum to {self.weights.sum()}, expected 1")
        if self.words is not None and self.words.shape[0] != n_atoms:
            raise ValueError("one word per atom is required")
        return self

    @property
    def d(self) -> int:
        return int(self.As.shape[1])

    @property
    def size(self) -> int:
        return int(self.ts.shape[0])

    def coords(self) -> np.ndarray:
        """(N, 1 + d*d + d) embedding (t, U row-major, a)"""
        n_atoms = self.size
        return np.hstack((self.ts[:, None], self.Us.reshape(n_atoms, -1), self.As))

    def atom(self, index: int) -> Similitude:
        return Similitude(t=float(self.ts[index]), U=self.Us[index], a=self.As[index])

    def atoms(self) -> List[Tuple[Similitude, float]]:
        return [(self.atom(i), float(self.weights[i])) for i in range(self.size)]

    @classmethod
    def from_atoms(cls, atoms: Sequence[Tuple[Similitude, float]]) -> "SimMeasure":
        """Builds a measure from (similitude, weight) pairs, normalizing the weights"""
        if not atoms:
            raise ValueError("a measure on G needs at least one atom")
        weights = np.array([w for _, w in atoms], dtype=float)
        return cls(
            ts=[g.t for g, _ in atoms],
            Us=np.stack([g.U for g, _ in atoms]),
            As=np.stack([g.a for g, _ in atoms]),
            weights=weights / weights.sum(),
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "atoms": [
                {"t": float(self.ts[i]), "U": self.Us[i].tolist(), "a": self.As[i].tolist(),
                 "weight": float(self.weights[i])}
                for i in range(self.size)
            ]
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "SimMeasure":
        atoms = [(Similitude.from_json(item), float(item.get("weight", 1.0))) for item in data["atoms"]]
        return cls.from_atoms(atoms)


class CovSummary(BaseModel):
    """Mean, covariance and its spectral decomposition"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mean: np.ndarray = Field(..., description="Mean vector")
    sigma: np.ndarray = Field(..., description="Covariance matrix")
    eigenvalues: np.ndarray = Field(..., description="Eigenvalues, descending, clipped at 0")
    eigenvectors: np.ndarray = Field(..., description="Orthonormal eigenvectors as columns")

    @field_validator("mean", "sigma", "eigenvalues", "eigenvectors", mode="before")
    @classmethod
    def _float_array(cls, v):
        return _frozen(np.array(v, dtype=float))

    @model_validator(mode="after")
    def _check(self):
        if np.max(np.abs(self.sigma - self.sigma.T), initial=0.0) > 1e-10:
            raise ValueError("covariance must be symmetric")
        if np.any(self.eigenvalues < -1e-10):
            raise ValueError("covariance must be positive semi-definite")
        return self

    @property
    def d(self) -> int:
        return int(self.mean.shape[0])

    def eigenvalue(self, k: int) -> float:
        """lambda_k with lambda_0 = d and lambda_k = 0 for k > d (1-based)"""
        if k <= 0:
            return float(self.d)
        if k > self.d:
            return 0.0
        return float(self.eigenvalues[k - 1])


class EntropySuite(BaseModel):
    """Entropies of a lattice measure at one level"""
    n: int = Field(..., ge=0, description="Level")
    H: float = Field(..., description="H(mu, D_n) in bits")
    H_n: float = Field(..., description="H / n (bits per level)")
    m: Optional[int] = Field(None, description="Coarser level of the conditional entropy")
    H_cond: Optional[float] = Field(None, description="H(mu, D_n | D_m)")
