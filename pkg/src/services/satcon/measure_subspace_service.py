"""
Service for subspaces attached to a lattice measure
Concentration subspaces, saturation subspaces and covariance concentration
"""
import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.models.measure import CovSummary, LatticeMeasure
from src.models.subspace import Subspace
from src.models.verdict import CovarianceCheck
from src.services.measure import MomentService
from src.services.subspace import SubspaceGeometryService
from src.utils.helpers import CascadeDegenerateError, DimensionMismatchError, ResolutionError
from .interfaces import MeasureSubspaceInterface
from .predicate_service import PredicateService

logger = logging.getLogger(__name__)


def concentration_cascade(eps: float, d: int) -> float:
    """eps_d = 4**d eps**(1/2**d)"""
    return float(4.0 ** d * eps ** (1.0 / 2.0 ** d))


def saturation_tolerance(m: int) -> float:
    """Saturation threshold max(C log2 m, 1)/m"""
    return max(settings.SATURATION_CONSTANT * np.log2(max(m, 1)), 1.0) / max(m, 1)


class MeasureSubspaceService(MeasureSubspaceInterface):
    """Selects subspaces describing a measure from eigen, axis and user candidates"""

    def __init__(self, predicates: PredicateService, geometry_service: SubspaceGeometryService,
                 moment_service: MomentService):
        self.predicates = predicates
        self.geometry = geometry_service
        self.moments = moment_service

    def candidates(self, mu: LatticeMeasure, extra: Optional[Sequence[Subspace]] = None) -> List[Subspace]:
        """
        Candidate subspaces of a measure

        Args:
            mu: Lattice measure
            extra: User-supplied candidates

        Returns:
            Exact and tie-expanded eigenspaces for r = 0..d, coordinate
            subspaces and the extra candidates, without duplicates
        """
        d = mu.d
        if d > settings.MAX_SUBSPACE_DIM:
            raise DimensionMismatchError(f"subspace machinery is limited to d <= {settings.MAX_SUBSPACE_DIM}")
        cov: CovSummary = self.moments.mean_cov(mu)
        found = [Subspace.zero(d), Subspace.full(d)]
        for r in range(1, d):
            found.append(Subspace(d=d, frame=cov.eigenvectors[:, :r]))
            found.append(self.geometry.top_eigenspace(cov, r))
        for k in range(1, d):
            found.extend(Subspace.axes(d, axes) for axes in itertools.combinations(range(d), k))
        for V in extra or []:
            if V.d != d:
                raise DimensionMismatchError(f"candidate in R^{V.d} for a measure on R^{d}")
            found.append(V)

        unique, seen = [], set()
        for V in found:
            key = self.geometry.canonical_key(V)
            if key not in seen:
                seen.add(key)
                unique.append(V)
        return unique

    def concentration_subspace(self, mu: LatticeMeasure, eps: float, cascade: bool = True,
                               extra: Optional[Sequence[Subspace]] = None) -> Tuple[Subspace, float]:
        """
        Essentially smallest subspace concentrating mu

        Args:
            mu: Lattice measure on [0,1]^d
            eps: Base tolerance
            cascade: Test at eps_d = 4**d eps**(1/2**d) instead of eps itself
            extra: User-supplied candidates

        Returns:
            (V, achieved_eps): the least-dimensional candidate such that mu is
            (V, achieved_eps)-concentrated, ties broken by larger captured mass

        Raises:
            CascadeDegenerateError: cascade requested with eps_d >= 1/2
        """
        if eps <= 0:
            raise ValueError("concentration tolerance must be positive")
        tol = eps
        if cascade:
            tol = concentration_cascade(eps, mu.d)
            if tol >= 0.5:
                logger.error(f"Concentration cascade eps_{mu.d}={tol:.3g} >= 1/2 for eps={eps}")
                raise CascadeDegenerateError(f"eps_{mu.d} = {tol:.3g} >= 1/2; use a smaller eps or cascade=False")

        if mu.size == 1:
            return Subspace.zero(mu.d), tol

        scored = []
        for V in self.candidates(mu, extra):
            mass, _ = self.predicates.best_translate(mu, V, tol)
            if mass >= 1.0 - tol - 1e-12:
                scored.append((V.k, -mass, self.geometry.canonical_key(V), V))
        scored.sort(key=lambda item: item[:3])
        return scored[0][3], tol

    def saturation_subspace(self, mu: LatticeMeasure, m: int,
                            extra: Optional[Sequence[Subspace]] = None) -> Tuple[Subspace, float]:
        """
        Essentially largest subspace saturating mu at scale m

        Args:
            mu: Lattice measure on [0,1]^d
            m: Scale, m <= L
            extra: User-supplied candidates

        Returns:
            (V, achieved_eps): the largest-dimensional candidate with
            saturation gap >= -achieved_eps, achieved_eps = max(C log2 m, 1)/m
        """
        if m > mu.L:
            raise ResolutionError(f"scale {m} exceeds the lattice resolution {mu.L}")
        delta = saturation_tolerance(m)
        scored = []
        for V in self.candidates(mu, extra):
            gap = self.predicates.saturation_gap(mu, V, m)
            if gap >= -delta - 1e-12:
                scored.append((-V.k, -gap, self.geometry.canonical_key(V), V))
        # {0} always qualifies
        scored.sort(key=lambda item: item[:3])
        return scored[0][3], delta

    def covariance_concentration_check(self, mu: LatticeMeasure, r: int) -> CovarianceCheck:
        """
        Concentration of mu near a translate of eigen_{1..r}

        Chebyshev's inequality gives (V_r, ((d - r) lambda_{r+1})**(1/3))
        concentration for every measure, so callers should rely on holds.
        holds_literal reports the outcome at lambda_{r+1}**(1/3) and is
        informational only; it can fail when d - r > 1.
        """
        cov = self.moments.mean_cov(mu)
        V = self.geometry.top_eigenspace(cov, r)
        lam = cov.eigenvalue(r + 1)
        eps_used = float(((mu.d - r) * lam) ** (1.0 / 3.0))
        eps_literal = float(lam ** (1.0 / 3.0))
        holds = self._concentrated_at(mu, V, eps_used)
        holds_literal = self._concentrated_at(mu, V, eps_literal)
        if not holds:
            logger.warning(f"Covariance concentration failed for r={r}: eps={eps_used:.3g}")
        return CovarianceCheck(r=r, holds=holds, subspace=V, epsilon_used=eps_used, holds_literal=holds_literal)

    def _concentrated_at(self, mu: LatticeMeasure, V: Subspace, eps: float) -> bool:
        if eps >= 1.0 or V.k == mu.d:
            return True
        if eps <= 0.0:
            # all mass on the mean translate
            coords, _ = self.predicates.projected(mu, V)
            return bool(np.max(np.abs(coords - mu.weights @ coords), initial=0.0) <= 1e-12)
        return self.predicates.is_concentrated(mu, V, eps)[0]
