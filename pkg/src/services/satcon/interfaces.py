"""
Interfaces for structural predicates and inverse-theorem verdicts
"""
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.models.measure import LatticeMeasure, SimMeasure
from src.models.subspace import Subspace
from src.models.verdict import CovarianceCheck, IsometryVerdict, KVReport, NonAffineReport, Verdict


class PredicateInterface(ABC):
    """Interface for concentration, uniformity and saturation"""

    @abstractmethod
    def is_concentrated(self, mu: LatticeMeasure, V: Subspace, eps: float) -> Tuple[bool, np.ndarray]:
        """Some translate W of V has mu(W^(eps)) >= 1 - eps; returns the witness translate"""
        pass

    @abstractmethod
    def is_uniform(self, mu: LatticeMeasure, V: Subspace, eps: float, m: int) -> bool:
        """(V, 2**-m)-concentrated with H_m(mu) > dim V - eps"""
        pass

    @abstractmethod
    def is_saturated(self, mu: LatticeMeasure, V: Subspace, eps: float, m: int) -> bool:
        """H_m(mu) >= dim V + H_m(pi_{V-perp} mu) - eps"""
        pass


class MeasureSubspaceInterface(ABC):
    """Interface for subspaces attached to a measure"""

    @abstractmethod
    def concentration_subspace(self, mu: LatticeMeasure, eps: float, cascade: bool = True,
                               extra: Optional[Sequence[Subspace]] = None) -> Tuple[Subspace, float]:
        """Essentially smallest subspace concentrating mu"""
        pass

    @abstractmethod
    def saturation_subspace(self, mu: LatticeMeasure, m: int,
                            extra: Optional[Sequence[Subspace]] = None) -> Tuple[Subspace, float]:
        """Essentially largest subspace saturating mu at scale m"""
        pass

    @abstractmethod
    def covariance_concentration_check(self, mu: LatticeMeasure, r: int) -> CovarianceCheck:
        """Concentration of mu near a translate of eigen_{1..r}"""
        pass


class KVInterface(ABC):
    """Interface for the iterated convolution bound"""

    @abstractmethod
    def kv_check(self, mu: LatticeMeasure, nu: LatticeMeasure, k: int, n: int) -> KVReport:
        """Compares H_n(mu * nu^(*k)) with the linear bound"""
        pass


class AffineInterface(ABC):
    """Interface for non-affinity checks"""

    @abstractmethod
    def non_affine_check(self, mu: LatticeMeasure, eps: float, sigma: float) -> NonAffineReport:
        """Largest sigma-tube mass over candidate proper affine subspaces"""
        pass

    @abstractmethod
    def sigma_independent(self, points: Sequence[Sequence[float]], sigma: float) -> bool:
        """Each point lies at distance >= sigma from the affine span of the others"""
        pass


class VerdictInterface(ABC):
    """Interface for inverse-theorem verdicts"""

    @abstractmethod
    def inverse_verdict(self, mu: LatticeMeasure, nu: LatticeMeasure, n: int, eps: float, m: int) -> Verdict:
        """Structure of mu and nu behind the entropy growth of mu * nu"""
        pass

    @abstractmethod
    def isometry_verdict(self, nu: SimMeasure, mu: LatticeMeasure, k: int, n: int, eps: float,
                         m: int) -> IsometryVerdict:
        """Linearized verdicts for the action of isometries"""
        pass
