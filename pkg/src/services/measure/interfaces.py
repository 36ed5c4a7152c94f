"""
Interfaces for measure services
Contracts for lattice measures, their convolutions, moments and the action of G
"""
from abc import ABC, abstractmethod
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.models.measure import CovSummary, EntropySuite, LatticeMeasure, SimMeasure
from src.models.similitude import Similitude


class LatticeMeasureInterface(ABC):
    """Interface for construction, entropies and components of lattice measures"""

    @abstractmethod
    def make_lattice(self, points: np.ndarray, weights: Sequence[float], L: int) -> LatticeMeasure:
        """Snaps weighted points to the level-L lattice"""
        pass

    @abstractmethod
    def entropy_suite(self, mu: LatticeMeasure, n: int, m: Optional[int] = None) -> EntropySuite:
        """H(mu, D_n), H_n(mu) and optionally H(mu, D_n | D_m)"""
        pass

    @abstractmethod
    def entropy_table(self, mu: LatticeMeasure, levels: Iterable[int], m: Optional[int] = None) -> List[EntropySuite]:
        """One EntropySuite per level"""
        pass

    @abstractmethod
    def component(self, mu: LatticeMeasure, cell: Sequence[int], i: int, rescaled: bool = True) -> LatticeMeasure:
        """Raw or rescaled component on a level-i cell"""
        pass

    @abstractmethod
    def component_expectation(
        self,
        mu: LatticeMeasure,
        levels: Iterable[int],
        f: Callable[[LatticeMeasure], float],
        rescaled: bool = True,
    ) -> float:
        """Exact average of f over random level-i components, i uniform in levels"""
        pass

    @abstractmethod
    def pushforward(self, g: Similitude, mu: LatticeMeasure, L_out: int) -> LatticeMeasure:
        """Image of mu under g, re-snapped at L_out"""
        pass


class ConvolutionInterface(ABC):
    """Interface for convolution of lattice measures"""

    @abstractmethod
    def convolve(self, mu: LatticeMeasure, nu: LatticeMeasure, method: str = "auto") -> LatticeMeasure:
        """mu * nu by cell-index addition"""
        pass

    @abstractmethod
    def self_convolve(self, mu: LatticeMeasure, k: int, method: str = "auto") -> LatticeMeasure:
        """mu^(*k)"""
        pass


class MomentInterface(ABC):
    """Interface for mean and covariance"""

    @abstractmethod
    def mean_cov(self, mu: LatticeMeasure) -> CovSummary:
        """Moments of the cell-center atomization"""
        pass


class GroupMeasureInterface(ABC):
    """Interface for measures on G and their action on R^d"""

    @abstractmethod
    def entropy_on_G(
        self,
        nu: SimMeasure,
        n: int,
        conditional_on_translation: bool = False,
        n_translation: Optional[int] = None,
    ) -> float:
        """H(nu, D_n^G), or H(nu, D_n^G | E_n'^G) when conditioning"""
        pass

    @abstractmethod
    def group_action(self, nu: SimMeasure, mu: LatticeMeasure, L_out: int) -> LatticeMeasure:
        """nu.mu, the push-forward of nu x mu under (g, x) -> g x"""
        pass

    @abstractmethod
    def orbit(self, nu: SimMeasure, x: np.ndarray, L_out: int) -> LatticeMeasure:
        """nu.x"""
        pass


ComponentList = List[Tuple[Tuple[int, ...], float, LatticeMeasure]]
