"""
Main measure service
Orchestrates lattice, convolution, moment and group services behind one entry point
"""
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.config.settings import settings
from src.models.measure import CovSummary, EntropySuite, LatticeMeasure, SimMeasure
from src.models.similitude import Similitude
from src.models.verdict import LocalGlobalReport
from src.utils.helpers import ResolutionError
from .construction_service import MeasureConstructionService
from .convolution_service import ConvolutionService
from .group_entropy_service import GroupEntropyService
from .lattice_service import LatticeService
from .moment_service import MomentService

logger = logging.getLogger(__name__)


class MeasureService:
    """
    Main service for dyadic measures
    Delegates to specialized services
    """

    def __init__(self):
        self.lattice_service = LatticeService()
        self.convolution_service = ConvolutionService(self.lattice_service)
        self.moment_service = MomentService()
        self.group_service = GroupEntropyService(self.lattice_service)
        self.construction_service = MeasureConstructionService(self.lattice_service)

    # Construction
    def make_lattice(self, points: np.ndarray, weights: Optional[Sequence[float]], L: int) -> LatticeMeasure:
        return self.lattice_service.make_lattice(points, weights, L)

    def from_cells(self, cells, weights, L: int) -> LatticeMeasure:
        return self.lattice_service.from_cells(cells, weights, L)

    # Entropy
    def entropy_suite(self, mu: LatticeMeasure, n: int, m: Optional[int] = None) -> EntropySuite:
        return self.lattice_service.entropy_suite(mu, n, m)

    def entropy_table(self, mu: LatticeMeasure, levels: Iterable[int], m: Optional[int] = None) -> List[EntropySuite]:
        return self.lattice_service.entropy_table(mu, levels, m)

    def entropy(self, mu: LatticeMeasure, n: int) -> float:
        return self.lattice_service.entropy(mu, n)

    def normalized_entropy(self, mu: LatticeMeasure, n: int) -> float:
        return self.lattice_service.normalized_entropy(mu, n)

    def entropy_on_G(self, nu: SimMeasure, n: int, conditional_on_translation: bool = False,
                     n_translation: Optional[int] = None) -> float:
        return self.group_service.entropy_on_G(nu, n, conditional_on_translation, n_translation)

    # Components
    def component(self, mu: LatticeMeasure, cell, i: int, rescaled: bool = True) -> LatticeMeasure:
        return self.lattice_service.component(mu, cell, i, rescaled)

    def components(self, mu: LatticeMeasure, i: int, rescaled: bool = True):
        return self.lattice_service.components(mu, i, rescaled)

    def component_expectation(self, mu: LatticeMeasure, levels: Iterable[int],
                              f: Callable[[LatticeMeasure], float], rescaled: bool = True) -> float:
        return self.lattice_service.component_expectation(mu, levels, f, rescaled)

    def component_probability(self, mu: LatticeMeasure, levels: Iterable[int],
                              predicate: Callable[[LatticeMeasure], bool], rescaled: bool = True) -> float:
        return self.lattice_service.component_probability(mu, levels, predicate, rescaled)

    # Convolution and maps
    def convolve(self, mu: LatticeMeasure, nu: LatticeMeasure, method: str = "auto") -> LatticeMeasure:
        return self.convolution_service.convolve(mu, nu, method)

    def self_convolve(self, mu: LatticeMeasure, k: int, method: str = "auto") -> LatticeMeasure:
        return self.convolution_service.self_convolve(mu, k, method)

    def pushforward(self, g: Similitude, mu: LatticeMeasure, L_out: int) -> LatticeMeasure:
        return self.lattice_service.pushforward(g, mu, L_out)

    def group_action(self, nu: SimMeasure, mu: LatticeMeasure, L_out: int) -> LatticeMeasure:
        return self.group_service.group_action(nu, mu, L_out)

    def orbit(self, nu: SimMeasure, x: np.ndarray, L_out: int) -> LatticeMeasure:
        return self.group_service.orbit(nu, x, L_out)

    def mean_cov(self, mu: LatticeMeasure) -> CovSummary:
        return self.moment_service.mean_cov(mu)

    # Reports
    def local_to_global(self, mu: LatticeMeasure, n: int, m: int) -> LocalGlobalReport:
        """
        Compares H_n(mu) with the average of H_m over components at levels 0..n

        Args:
            mu: Lattice measure supported in [0,1)^d
            n: Global level
            m: Component scale, m < n and n + m <= L

        Returns:
            LocalGlobalReport with the calibrated bound C m / n
        """
        if m >= n:
            raise ValueError("component scale must be smaller than the global level")
        if n + m > mu.L:
            raise ResolutionError(f"levels up to {n + m} needed, lattice resolution is {mu.L}")
        average = self.lattice_service.average_component_entropy(mu, range(n + 1), m)
        return LocalGlobalReport(
            n=n,
            m=m,
            global_entropy=self.normalized_entropy(mu, n),
            component_average=average,
            bound=settings.local_global_constant(mu.d) * m / n,
        )

    def conv_growth(self, mu: LatticeMeasure, nu: LatticeMeasure, n: int) -> Dict[str, float]:
        """H_n of mu, nu and mu * nu with the observed growth"""
        conv = self.convolve(mu, nu)
        H_mu = self.normalized_entropy(mu, n)
        H_conv = self.normalized_entropy(conv, n)
        return {
            "n": n,
            "H_mu": H_mu,
            "H_nu": self.normalized_entropy(nu, n),
            "H_conv": H_conv,
            "growth": H_conv - H_mu,
        }
