"""
Service for the iterated convolution entropy bound
"""
import logging

from src.config.settings import settings
from src.models.measure import LatticeMeasure
from src.models.verdict import KVReport
from src.services.measure import ConvolutionService, LatticeService
from src.utils.helpers import ResolutionError
from .interfaces import KVInterface

logger = logging.getLogger(__name__)

MONOTONE_TOL = 1e-9


class KVService(KVInterface):
    """Checks H_n(mu * nu^(*k)) against the linear growth bound"""

    def __init__(self, lattice_service: LatticeService, convolution_service: ConvolutionService):
        self.lattice_service = lattice_service
        self.convolution_service = convolution_service

    def kv_check(self, mu: LatticeMeasure, nu: LatticeMeasure, k: int, n: int) -> KVReport:
        """
        Iterated convolution bound

        Args:
            mu: Lattice measure
            nu: Lattice measure
            k: Number of nu factors, k >= 1
            n: Level, n <= L

        Returns:
            KVReport with lhs = H_n(mu * nu^(*k)),
            rhs = H_n(mu) + k (H_n(mu * nu) - H_n(mu)) + C_kv k / n,
            and the exact lattice increments H(mu * nu^(*(j+1))) - H(mu * nu^(*j)), j < k
        """
        if k < 1:
            raise ValueError("fold count must be at least 1")
        L = min(mu.L, nu.L)
        if n > L or n < 1:
            raise ResolutionError(f"level {n} must lie in 1..{L}")

        # successive products mu * nu^(*j), j = 0..k
        chain = [mu]
        for _ in range(k):
            chain.append(self.convolution_service.convolve(chain[-1], nu))
        chain[0] = self.lattice_service.coarsen(mu, L) if mu.L != L else mu

        H0 = self.lattice_service.normalized_entropy(chain[0], n)
        H1 = self.lattice_service.normalized_entropy(chain[1], n)
        lhs = self.lattice_service.normalized_entropy(chain[-1], n)
        rhs = H0 + k * (H1 - H0) + settings.kv_constant(mu.d) * k / n

        exact = [self.lattice_service.entropy(c, L) for c in chain]
        deltas = [exact[j + 1] - exact[j] for j in range(k)]
        monotone = all(deltas[j + 1] <= deltas[j] + MONOTONE_TOL for j in range(len(deltas) - 1))
        if rhs < lhs:
            logger.warning(f"Iterated convolution bound violated: lhs={lhs:.6f} rhs={rhs:.6f} (k={k}, n={n})")
        return KVReport(k=k, n=n, lhs=lhs, rhs=rhs, slack=rhs - lhs, deltas=deltas, deltas_monotone=monotone)
