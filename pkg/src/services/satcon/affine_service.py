"""
Service for non-affinity of measures and sigma-independence of point sets
"""
import itertools
import logging
from typing import Iterator, List, Sequence

import numpy as np

from src.config.settings import settings
from src.models.measure import LatticeMeasure
from src.models.subspace import AffineSubspace, Subspace
from src.models.verdict import NonAffineReport
from src.services.measure import MomentService
from .interfaces import AffineInterface

logger = logging.getLogger(__name__)

# tuples of three or more atoms use fewer of the heaviest atoms
WIDE_TUPLE_ATOMS = 16


class AffineService(AffineInterface):
    """
    Tube masses of proper affine subspaces

    Failure of non-affinity is certified exactly by a witness; success holds
    only over the candidate family.
    """

    def __init__(self, moment_service: MomentService):
        self.moments = moment_service

    def _candidates(self, mu: LatticeMeasure) -> Iterator[AffineSubspace]:
        d = mu.d
        centers = mu.centers()
        heaviest = np.argsort(-mu.weights, kind="stable")
        for size in range(1, d + 1):
            pool = heaviest[: settings.NON_AFFINE_ATOMS if size <= 2 else WIDE_TUPLE_ATOMS]
            for combo in itertools.combinations(pool, size):
                points = centers[list(combo)]
                direction = Subspace.span(points[1:] - points[0], d)
                if direction.k == size - 1:
                    yield AffineSubspace(point=points[0], direction=direction)

        cov = self.moments.mean_cov(mu)
        for r in range(d):
            yield AffineSubspace(point=cov.mean, direction=Subspace(d=d, frame=cov.eigenvectors[:, :r]))

    def non_affine_check(self, mu: LatticeMeasure, eps: float, sigma: float) -> NonAffineReport:
        """
        Largest sigma-tube mass over candidate proper affine subspaces

        Candidates pass through tuples of the settings.NON_AFFINE_ATOMS heaviest
        atoms (64 by default; 16 for tuples of three or more points) plus the
        covariance eigenspaces at the mean. A measure spread thinly over many
        light atoms can hide a heavy tube from this search, so a True verdict
        is only a statement about the candidates.

        Args:
            mu: Lattice measure
            eps: Mass threshold
            sigma: Tube radius

        Returns:
            NonAffineReport; holds_over_candidates is True when every
            candidate tube carries mass < eps
        """
        centers = mu.centers()
        worst, worst_mass, count = None, -1.0, 0
        for A in self._candidates(mu):
            count += 1
            mass = float(mu.weights[A.distances(centers) < sigma].sum())
            if mass > worst_mass:
                worst, worst_mass = A, mass
        logger.info(f"Evaluated {count} affine candidates, worst tube mass {worst_mass:.4f}")
        return NonAffineReport(
            holds_over_candidates=worst_mass < eps,
            worst=worst,
            worst_mass=max(worst_mass, 0.0),
            candidates=count,
        )

    def sigma_independent(self, points: Sequence[Sequence[float]], sigma: float) -> bool:
        """
        Checks that each point is at distance >= sigma from the affine span of the others

        Args:
            points: Points of R^d, one per row
            sigma: Separation

        Returns:
            True when the condition holds for every point (a single point always qualifies)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        count, d = points.shape
        if count <= 1:
            return True
        for i in range(count):
            others: List[np.ndarray] = [points[j] for j in range(count) if j != i]
            base = others[0]
            direction = Subspace.span([p - base for p in others[1:]], d) if len(others) > 1 else Subspace.zero(d)
            distance = AffineSubspace(point=base, direction=direction).distances(points[i:i + 1])[0]
            if distance < sigma:
                return False
        return True
