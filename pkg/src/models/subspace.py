"""
Data models for linear and affine subspaces of R^d
"""
from typing import Any, Dict, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

FRAME_TOL = 1e-10
RANK_TOL = 1e-9


class Subspace(BaseModel):
    """Linear subspace given by a d x k matrix with orthonormal columns"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    d: int = Field(..., ge=1, description="Ambient dimension")
    frame: np.ndarray = Field(..., description="Orthonormal basis as columns, shape (d, k)")

    @field_validator("frame", mode="before")
    @classmethod
    def _as_array(cls, v):
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check(self):
        if self.frame.ndim != 2 or self.frame.shape[0] != self.d:
            raise ValueError(f"frame must have shape ({self.d}, k)")
        k = self.frame.shape[1]
        if k > self.d:
            raise ValueError("subspace dimension exceeds ambient dimension")
        if k and np.max(np.abs(self.frame.T @ self.frame - np.eye(k))) > FRAME_TOL:
            raise ValueError("frame columns are not orthonormal")
        return self

    @property
    def k(self) -> int:
        return int(self.frame.shape[1])

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d=d, frame=np.zeros((d, 0)))

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(d=d, frame=np.eye(d))

    @classmethod
    def span(cls, vectors: Sequence[Sequence[float]], d: int, tol: float = RANK_TOL) -> "Subspace":
        """Span of the given vectors; numerically dependent directions are dropped"""
        mat = np.array(vectors, dtype=float).reshape(-1, d).T
        if mat.shape[1] == 0 or not np.any(mat):
            return cls.zero(d)
        u, s, _ = np.linalg.svd(mat, full_matrices=False)
        rank = int(np.sum(s > tol * max(1.0, s[0])))
        return cls(d=d, frame=u[:, :rank])

    @classmethod
    def axes(cls, d: int, indices: Sequence[int]) -> "Subspace":
        """Coordinate subspace spanned by e_i for the given 0-based indices"""
        return cls(d=d, frame=np.eye(d)[:, list(indices)])

    def to_json(self) -> Dict[str, Any]:
        return {"d": self.d, "k": self.k, "frame": self.frame.T.tolist()}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Subspace":
        d = int(data["d"])
        columns = data.get("frame", [])
        return cls.span(columns, d) if columns else cls.zero(d)


class AffineSubspace(BaseModel):
    """Translate point + V of a linear subspace V"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    point: np.ndarray = Field(..., description="A point of the affine subspace")
    direction: Subspace = Field(..., description="Linear part")

    @field_validator("point", mode="before")
    @classmethod
    def _as_array(cls, v):
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    def distances(self, points: np.ndarray) -> np.ndarray:
        """Euclidean distance of each row of points to the affine subspace"""
        diff = np.asarray(points, dtype=float) - self.point
        residual = diff - diff @ self.direction.projector()
        return np.linalg.norm(residual, axis=1)

    def to_json(self) -> Dict[str, Any]:
        return {"point": self.point.tolist(), "direction": self.direction.to_json()}
