"""
Data models for iterated function systems and their diagnostics
"""
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.similitude import Similitude

# A composition word i_1 ... i_n, 0-based alphabet indices
Word = Tuple[int, ...]


def display_word(word: Word) -> List[int]:
    """1-based rendering of a word for output files"""
    return [int(i) + 1 for i in word]


class IFSSystem(BaseModel):
    """Contracting similitudes phi_i with a probability vector p"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = Field("custom", description="System identifier")
    maps: List[Similitude] = Field(..., min_length=1, description="Contracting similitudes")
    probs: np.ndarray = Field(..., description="Positive weights summing to 1")

    @field_validator("probs", mode="before")
    @classmethod
    def _as_array(cls, v):
        arr = np.array(v, dtype=float)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check(self):
        d = self.maps[0].d
        if any(g.d != d for g in self.maps):
            raise ValueError("all maps must act on the same R^d")
        if any(not 0.0 < g.r < 1.0 for g in self.maps):
            raise ValueError("every map must be a strict contraction (0 < r < 1)")
        if self.probs.shape != (len(self.maps),):
            raise ValueError("one probability per map is required")
        if np.any(self.probs <= 0) or abs(self.probs.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must be positive and sum to 1")
        return self

    @property
    def d(self) -> int:
        return self.maps[0].d

    @property
    def size(self) -> int:
        return len(self.maps)

    @property
    def is_exact(self) -> bool:
        return all(g.exact is not None for g in self.maps)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([g.r for g in self.maps])

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "d": self.d,
            "maps": [g.to_json() for g in self.maps],
            "probs": self.probs.tolist(),
        }


class SeparationResult(BaseModel):
    """Minimal distance between level-n compositions and a closest pair"""
    n: int
    delta: float = Field(..., ge=0)
    word_i: Optional[Word] = None
    word_j: Optional[Word] = None

    def to_row(self) -> Dict[str, Any]:
        log_ratio = float(np.log2(self.delta) / self.n) if self.delta > 0 and self.n > 0 else None
        return {
            "n": self.n,
            "delta": self.delta,
            "log2_delta_over_n": log_ratio,
            "word_i": " ".join(map(str, display_word(self.word_i))) if self.word_i else "",
            "word_j": " ".join(map(str, display_word(self.word_j))) if self.word_j else "",
        }


class OverlapResult(BaseModel):
    """First level at which two distinct words give the same map"""
    n: int
    word_i: Word
    word_j: Word
    exact: bool = Field(True, description="False when the coincidence is numeric only")

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "words": [display_word(self.word_i), display_word(self.word_j)],
            "exact": self.exact,
        }


class EntropyDiagnostics(BaseModel):
    """Normalized G-entropies of nu^(n) and the entropy of its orbit measure"""
    n: int
    n_prime: int
    q: float
    A: float = Field(..., description="H(nu^(n), E_n'^G) / n'")
    B: float = Field(..., description="H(nu^(n), D_qn'^G | E_n'^G) / n'")
    C: float = Field(..., description="H(nu~^(n), D_n') / n'")
    bridge_bound: float = Field(..., description="C_0 / n'")

    @property
    def bridge_holds(self) -> bool:
        return abs(self.A - self.C) <= self.bridge_bound


class SliceEntropy(BaseModel):
    """Averaged local entropies of projections to V-perp and of the fibers along V"""
    p_scale: int
    levels: int
    proj_avg: float
    cond_avg: float

    @property
    def total(self) -> float:
        return self.proj_avg + self.cond_avg
