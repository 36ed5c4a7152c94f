"""
Service for dimensions and entropy diagnostics of self-similar measures
"""
import logging
import math
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.models.ifs import EntropyDiagnostics, IFSSystem, SliceEntropy
from src.models.measure import LatticeMeasure
from src.models.subspace import Subspace
from src.services.measure import MeasureService
from src.services.satcon import PredicateService
from src.utils.helpers import ResolutionError
from .composition_service import CompositionService
from .interfaces import DimensionInterface
from .system_service import similarity_dimension

logger = logging.getLogger(__name__)


class DimensionService(DimensionInterface):
    """Similarity dimensions, the orbit measures nu~^(n) and their entropies"""

    def __init__(self, composition_service: CompositionService, measure_service: MeasureService,
                 predicates: PredicateService):
        self.composition_service = composition_service
        self.measure_service = measure_service
        self.predicates = predicates

    def sdim(self, ifs: IFSSystem, mode: str = "set") -> float:
        """
        Similarity dimension

        Args:
            ifs: The system
            mode: "set" solves sum r_i**s = 1 by bisection; "measure" gives
                sum p_i log p_i / sum p_i log r_i

        Returns:
            The dimension
        """
        if mode == "set":
            return similarity_dimension(ifs.ratios)
        if mode == "measure":
            p = ifs.probs
            return float(np.sum(p * np.log(p)) / np.sum(p * np.log(ifs.ratios)))
        raise ValueError(f"unknown dimension mode '{mode}'")

    def mean_contraction(self, ifs: IFSSystem) -> float:
        """r = prod r_i**p_i"""
        return float(np.exp(np.sum(ifs.probs * np.log(ifs.ratios))))

    def n_prime(self, ifs: IFSSystem, n: int) -> int:
        """floor(n log2(1/r)), so that 2**-n' ~ r**n"""
        return int(math.floor(n * -math.log2(self.mean_contraction(ifs)) + 1e-9))

    def fixed_point(self, ifs: IFSSystem, index: int = 0) -> np.ndarray:
        """Fixed point of phi_index: solves (I - r U) x = a"""
        g = ifs.maps[index]
        return np.linalg.solve(np.eye(ifs.d) - g.r * g.U, g.a)

    def orbit_points(self, ifs: IFSSystem, n: int, x: Optional[np.ndarray] = None):
        """Points phi_w(x) and weights p_w over all level-n words"""
        arrays = self.composition_service.arrays(ifs, n, exact=False)
        x = self.fixed_point(ifs) if x is None else np.asarray(x, dtype=float)
        points = (2.0 ** (-arrays.ts))[:, None] * np.einsum("wij,j->wi", arrays.Us, x) + arrays.As
        return points, arrays.weights

    def nu_tilde(self, ifs: IFSSystem, n: int, x: Optional[np.ndarray] = None,
                 L_out: Optional[int] = None) -> LatticeMeasure:
        """
        nu~^(n) = sum_w p_w delta_{phi_w(x)} on the level-L_out lattice

        Args:
            ifs: The system
            n: Depth
            x: Base point (fixed point of phi_1 by default)
            L_out: Lattice level (n' by default)

        Returns:
            LatticeMeasure
        """
        points, weights = self.orbit_points(ifs, n, x)
        level = self.n_prime(ifs, n) if L_out is None else L_out
        return self.measure_service.make_lattice(points, weights, level)

    def dim_estimate(self, ifs: IFSSystem, n: int, L_out: Optional[int] = None) -> float:
        """H(nu~^(n), D_n' | D_0) / n'"""
        n_prime = self.n_prime(ifs, n)
        if n_prime < 1:
            raise ResolutionError(f"depth {n} gives n' = {n_prime}; increase n")
        mu = self.nu_tilde(ifs, n, L_out=max(n_prime, L_out or 0))
        return self.measure_service.lattice_service.conditional_entropy(mu, n_prime, 0) / n_prime

    def entropy_diagnostics(self, ifs: IFSSystem, n: int, q: float) -> EntropyDiagnostics:
        """
        Normalized entropies of nu^(n) over the G-partitions

        Args:
            ifs: The system
            n: Depth
            q: Refinement factor, q > 1

        Returns:
            EntropyDiagnostics with A = H(nu^(n), E_n'^G)/n',
            B = H(nu^(n), D_qn'^G | E_n'^G)/n' and C = H(nu~^(n), D_n')/n'
        """
        if q <= 1:
            raise ValueError("q must exceed 1")
        n_prime = self.n_prime(ifs, n)
        if n_prime < 1:
            raise ResolutionError(f"depth {n} gives n' = {n_prime}; increase n")
        nu = self.composition_service.nu_n(ifs, n)
        group = self.measure_service.group_service
        A = group.translation_entropy(nu, n_prime) / n_prime
        B = group.entropy_on_G(nu, int(math.ceil(q * n_prime)), conditional_on_translation=True,
                               n_translation=n_prime) / n_prime
        C = self.measure_service.entropy(self.nu_tilde(ifs, n, L_out=n_prime), n_prime) / n_prime
        return EntropyDiagnostics(
            n=n, n_prime=n_prime, q=q, A=A, B=B, C=C,
            bridge_bound=settings.BRIDGE_CONSTANT / n_prime,
        )

    def slice_entropy(self, ifs: IFSSystem, V: Subspace, n: int, p_scale: int,
                      L: Optional[int] = None) -> SliceEntropy:
        """
        Local entropy averages of projections to V-perp and of fibers along V

        For mu = nu~^(n) and levels i = 0..n':
        proj term (1/p) H(mu, pi^-1 D_{i+p} | D_i),
        fiber term (1/p) H(mu, D_{i+p} | pi^-1 D_{i+p} v D_i),
        with pi the orthogonal projection onto V-perp.

        Args:
            ifs: The system
            V: Fiber direction
            n: Depth of the approximation
            p_scale: Scale p
            L: Lattice level (n' + p by default)

        Returns:
            SliceEntropy with both averages
        """
        if p_scale < 1:
            raise ValueError("p_scale must be positive")
        levels = self.n_prime(ifs, n)
        level = levels + p_scale if L is None else L
        if levels + p_scale > level:
            raise ResolutionError(f"levels up to {levels + p_scale} needed, lattice resolution is {level}")
        mu = self.nu_tilde(ifs, n, L_out=level)
        lattice = self.measure_service.lattice_service

        proj_total, cond_total = 0.0, 0.0
        for i in range(levels + 1):
            coarse = lattice.coarse_cells(mu, i)
            fine = lattice.coarse_cells(mu, i + p_scale)
            projected = self.predicates.projected_cells(mu, V, i + p_scale)
            H_coarse = lattice.joint_entropy(mu, coarse)
            H_proj = lattice.joint_entropy(mu, np.hstack((projected, coarse)))
            H_fine = lattice.joint_entropy(mu, np.hstack((fine, projected)))
            proj_total += (H_proj - H_coarse) / p_scale
            cond_total += (H_fine - H_proj) / p_scale
        count = levels + 1
        return SliceEntropy(p_scale=p_scale, levels=count, proj_avg=proj_total / count, cond_avg=cond_total / count)
