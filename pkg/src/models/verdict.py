"""
Data models for structural checks and inverse-theorem verdicts
"""
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.subspace import AffineSubspace, Subspace


class Verdict(BaseModel):
    """Observed entropy growth of mu * nu with the per-level subspace structure"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    epsilon: float
    m: int
    entropy_before: float = Field(..., description="H_n(mu)")
    entropy_after: float = Field(..., description="H_n(mu * nu)")
    growth: float = Field(..., description="entropy_after - entropy_before")
    subspaces: List[Subspace] = Field(..., description="V_0 .. V_n")
    sat_fraction: float = Field(..., ge=0.0, le=1.0)
    conc_fraction: float = Field(..., ge=0.0, le=1.0)
    mean_dim: float = Field(..., ge=0.0)
    passed: bool

    @model_validator(mode="after")
    def _check(self):
        if abs(self.growth - (self.entropy_after - self.entropy_before)) > 1e-12:
            raise ValueError("growth must equal entropy_after - entropy_before")
        if self.subspaces and self.mean_dim > self.subspaces[0].d + 1e-12:
            raise ValueError("mean dimension exceeds the ambient dimension")
        return self

    @property
    def dims(self) -> List[int]:
        return [V.k for V in self.subspaces]

    def summary_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "growth": self.growth,
            "sat_fraction": self.sat_fraction,
            "conc_fraction": self.conc_fraction,
            "mean_dim": self.mean_dim,
            "passed": self.passed,
        }

    def to_json(self) -> Dict[str, Any]:
        data = self.summary_row()
        data.update({
            "epsilon": self.epsilon,
            "m": self.m,
            "entropy_before": self.entropy_before,
            "entropy_after": self.entropy_after,
            "subspaces": [V.to_json() for V in self.subspaces],
        })
        return data


class PairVerdict(BaseModel):
    """Verdict of one (group component, space component) pair of the isometry check"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weight: float = Field(..., ge=0.0)
    base_point: np.ndarray
    verdict: Verdict
    subspaces: List[Subspace] = Field(..., description="Verdict subspaces mapped back by U_0^-1")

    def to_json(self) -> Dict[str, Any]:
        data = self.verdict.to_json()
        data["subspaces"] = [V.to_json() for V in self.subspaces]
        data.update({"weight": self.weight, "base_point": self.base_point.tolist()})
        return data


class IsometryVerdict(BaseModel):
    """Entropy growth under an isometry action with per-pair linearized verdicts"""
    n: int
    k: int
    growth: float
    entropy_before: float
    entropy_after: float
    group_entropy: float = Field(..., description="H_n(nu) over the G-partition")
    pairs: List[PairVerdict]
    pass_rate: float = Field(..., ge=0.0, le=1.0)
    mean_dim: float = Field(..., ge=0.0)
    dim_bound: float = Field(..., description="c * H_n(nu); reported, not asserted")

    def summary_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "growth": self.growth,
            "group_entropy": self.group_entropy,
            "pairs": len(self.pairs),
            "pass_rate": self.pass_rate,
            "mean_dim": self.mean_dim,
            "dim_bound": self.dim_bound,
        }

    def to_json(self) -> Dict[str, Any]:
        data = self.summary_row()
        data["entropy_before"] = self.entropy_before
        data["entropy_after"] = self.entropy_after
        data["pair_verdicts"] = [p.to_json() for p in self.pairs]
        return data


class KVReport(BaseModel):
    """Iterated convolution bound evaluated at one level"""
    k: int
    n: int
    lhs: float
    rhs: float
    slack: float
    deltas: List[float] = Field(default_factory=list, description="H(mu*nu^(j+1)) - H(mu*nu^j), exact lattice")
    deltas_monotone: bool = True

    def to_row(self) -> Dict[str, Any]:
        return {"k": self.k, "n": self.n, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "deltas_monotone": self.deltas_monotone}


class CovarianceCheck(BaseModel):
    """Concentration of a measure near its top eigenspaces"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    r: int
    holds: bool
    subspace: Subspace
    epsilon_used: float
    holds_literal: bool = Field(..., description="Outcome with epsilon = lambda_{r+1}**(1/3)")


class NonAffineReport(BaseModel):
    """Largest tube mass found over a family of proper affine subspaces"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    holds_over_candidates: bool
    worst: Optional[AffineSubspace]
    worst_mass: float
    candidates: int


class LocalGlobalReport(BaseModel):
    """Global normalized entropy against the average entropy of components"""
    n: int
    m: int
    global_entropy: float
    component_average: float
    bound: float

    @property
    def gap(self) -> float:
        return abs(self.global_entropy - self.component_average)

    @property
    def holds(self) -> bool:
        return self.gap <= self.bound
