"""
Service for moments of lattice measures
"""
import logging

import numpy as np

from src.models.measure import CovSummary, LatticeMeasure
from .interfaces import MomentInterface

logger = logging.getLogger(__name__)


class MomentService(MomentInterface):
    """Mean, covariance and eigen-decomposition of the cell-center atomization"""

    def mean_cov(self, mu: LatticeMeasure) -> CovSummary:
        """
        Computes m(mu) and Sigma(mu)

        Args:
            mu: Lattice measure

        Returns:
            CovSummary with eigenvalues sorted in descending order
        """
        centers = mu.centers()
        mean = mu.weights @ centers
        centered = centers - mean
        sigma = (centered * mu.weights[:, None]).T @ centered
        sigma = (sigma + sigma.T) / 2.0
        eigenvalues, eigenvectors = np.linalg.eigh(sigma)
        order = np.argsort(-eigenvalues, kind="stable")
        return CovSummary(
            mean=mean,
            sigma=sigma,
            eigenvalues=np.clip(eigenvalues[order], 0.0, None),
            eigenvectors=eigenvectors[:, order],
        )
