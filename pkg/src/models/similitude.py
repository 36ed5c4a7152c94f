"""
Data models for similitudes of R^d
Elements rU + a of the similarity group, stored as (t, U, a) with r = 2**-t
"""
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ORTHOGONALITY_TOL = 1e-10


def _frac_pair(x: Fraction) -> list:
    return [x.numerator, x.denominator]


def _read_frac(value: Any) -> Fraction:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(str(value))


class ExactParts(BaseModel):
    """Rational description (r, U, a) of a similitude"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    r: Fraction = Field(..., description="Contraction ratio")
    U: Tuple[Tuple[Fraction, ...], ...] = Field(..., description="Orthogonal part, row-major")
    a: Tuple[Fraction, ...] = Field(..., description="Translation")

    @property
    def key(self) -> Tuple:
        """Hashable exact identity of the map"""
        return (self.r, self.U, self.a)

    def to_json(self) -> Dict[str, Any]:
        return {
            "r": _frac_pair(self.r),
            "U": [[_frac_pair(x) for x in row] for row in self.U],
            "a": [_frac_pair(x) for x in self.a],
        }


class Similitude(BaseModel):
    """A similitude x -> 2**-t U x + a"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: float = Field(..., description="Log-contraction, r = 2**-t")
    U: np.ndarray = Field(..., description="Orthogonal d x d matrix")
    a: np.ndarray = Field(..., description="Translation vector")
    exact: Optional[ExactParts] = Field(None, description="Rational form when available")

    @field_validator("U", "a", mode="before")
    @classmethod
    def _as_array(cls, v):
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.a.ndim != 1:
            raise ValueError("translation must be a vector")
        d = self.a.shape[0]
        if self.U.shape != (d, d):
            raise ValueError(f"orthogonal part must be {d}x{d}, got {self.U.shape}")
        if not np.isfinite(self.t) or not np.all(np.isfinite(self.U)) or not np.all(np.isfinite(self.a)):
            raise ValueError("similitude entries must be finite")
        if d and np.max(np.abs(self.U.T @ self.U - np.eye(d))) > ORTHOGONALITY_TOL:
            raise ValueError("U is not orthogonal")
        return self

    @property
    def d(self) -> int:
        return int(self.a.shape[0])

    @property
    def r(self) -> float:
        return float(2.0 ** (-self.t))

    @property
    def is_isometry(self) -> bool:
        return abs(self.t) <= 1e-12

    @property
    def coords(self) -> np.ndarray:
        """Embedding (t, U row-major, a) used by the dyadic G-partitions"""
        return np.concatenate(([self.t], self.U.reshape(-1), self.a))

    @classmethod
    def identity(cls, d: int) -> "Similitude":
        one, zero = Fraction(1), Fraction(0)
        exact = ExactParts(
            r=one,
            U=tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d)),
            a=tuple(zero for _ in range(d)),
        )
        return cls(t=0.0, U=np.eye(d), a=np.zeros(d), exact=exact)

    @classmethod
    def from_ratio(cls, r: float, U: Sequence, a: Sequence) -> "Similitude":
        """Builds a similitude from its contraction ratio r > 0"""
        if r <= 0:
            raise ValueError("contraction ratio must be positive")
        return cls(t=float(-np.log2(r)), U=U, a=a)

    @classmethod
    def from_exact(cls, r: Fraction, U: Sequence[Sequence[Fraction]], a: Sequence[Fraction]) -> "Similitude":
        """Builds a similitude carrying both float and rational forms"""
        exact = ExactParts(r=Fraction(r), U=tuple(tuple(Fraction(x) for x in row) for row in U),
                           a=tuple(Fraction(x) for x in a))
        return cls(
            t=float(-np.log2(float(exact.r))),
            U=[[float(x) for x in row] for row in exact.U],
            a=[float(x) for x in exact.a],
            exact=exact,
        )

    def to_json(self) -> Dict[str, Any]:
        if self.exact is not None:
            return self.exact.to_json()
        return {"t": self.t, "U": self.U.tolist(), "a": self.a.tolist()}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Similitude":
        """
        Parses {t|r, U, a}

        With "t" the map is float-only. With "r" every entry is read as the
        exact rational it denotes: integers, [numerator, denominator] pairs,
        strings such as "1/3", and decimal literals (0.5 is 1/2).
        """
        a = data["a"]
        d = len(a)
        U = data.get("U", np.eye(d).tolist())
        if "t" in data:
            return cls(t=float(data["t"]), U=U, a=a)
        return cls.from_exact(
            _read_frac(data["r"]),
            [[_read_frac(x) for x in row] for row in U],
            [_read_frac(x) for x in a],
        )


class GCellId(BaseModel):
    """Index of a dyadic cell of the similarity group at some level"""
    model_config = ConfigDict(frozen=True)

    level: int = Field(..., ge=0, description="Dyadic level n")
    coords: Tuple[int, ...] = Field(..., description="floor(2**n * coordinates)")
