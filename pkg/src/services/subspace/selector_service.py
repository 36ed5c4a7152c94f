"""
Service for selecting subspaces from families of subspaces
Minimal engulfing subspaces and maximal common subspaces with cascade constants
"""
import itertools
import logging
from typing import List, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.models.subspace import Subspace
from .geometry_service import INTERSECTION_TOL, SubspaceGeometryService
from .interfaces import SubspaceSelectorInterface

logger = logging.getLogger(__name__)

REWEIGHT_ROUNDS = 12


def cascade_epsilon(eps: float, k: int) -> float:
    """eps_k = 2**k eps**(1/2**k)"""
    return float(2.0 ** k * eps ** (1.0 / 2.0 ** k))


def common_delta(eps: float, d: int) -> float:
    """delta = 2**((d+1)**2) eps**(1/2**(d*d))"""
    return float(2.0 ** ((d + 1) ** 2) * eps ** (1.0 / 2.0 ** (d * d)))


class SubspaceSelectorService(SubspaceSelectorInterface):
    """Constructive subspace selectors over finite families"""

    def __init__(self, geometry_service: SubspaceGeometryService):
        self.geometry = geometry_service

    @staticmethod
    def _check_family(W_list: Sequence[Subspace]) -> int:
        if not W_list:
            raise ValueError("a nonempty family of subspaces is required")
        d = W_list[0].d
        if any(W.d != d for W in W_list):
            raise ValueError("all subspaces must live in the same R^d")
        if d > settings.MAX_SUBSPACE_DIM:
            raise ValueError(f"subspace machinery is limited to d <= {settings.MAX_SUBSPACE_DIM}")
        return d

    def max_deviation(self, W_list: Sequence[Subspace], V: Subspace) -> float:
        """max over W of sup_{w in W unit} dist(w, V)"""
        return max(self.geometry.deviation(W, V) for W in W_list)

    def _weighted_top(self, W_list: Sequence[Subspace], weights: np.ndarray, k: int, d: int) -> Subspace:
        total = sum(w * W.projector() for w, W in zip(weights, W_list))
        eigenvalues, eigenvectors = np.linalg.eigh(total)
        order = np.argsort(-eigenvalues, kind="stable")
        return Subspace(d=d, frame=eigenvectors[:, order[:k]])

    def candidates(self, W_list: Sequence[Subspace], k: int, d: int) -> List[Subspace]:
        """
        Dimension-k candidates

        Top-k eigenspaces of the (reweighted) sum of projectors, members of
        dimension k, coordinate subspaces, and spans of members' principal
        directions.
        """
        if k == 0:
            return [Subspace.zero(d)]
        if k == d:
            return [Subspace.full(d)]
        found = [W for W in W_list if W.k == k]
        found.extend(Subspace.axes(d, axes) for axes in itertools.combinations(range(d), k))

        # minimax refinement: push weight towards the worst member
        weights = np.ones(len(W_list))
        for _ in range(REWEIGHT_ROUNDS):
            V = self._weighted_top(W_list, weights, k, d)
            found.append(V)
            deviations = np.array([self.geometry.deviation(W, V) for W in W_list])
            if deviations.max() <= 0.0:
                break
            weights = weights * (1.0 + deviations / deviations.max())

        lines = [W.frame[:, j] for W in W_list for j in range(W.k)]
        if len(lines) >= k and len(lines) <= 12:
            for combo in itertools.combinations(lines, k):
                V = Subspace.span(combo, d)
                if V.k == k:
                    found.append(V)
        return found

    def _best(self, W_list: Sequence[Subspace], candidates: Sequence[Subspace]) -> Tuple[Subspace, float]:
        scored = [(self.max_deviation(W_list, V), self.geometry.canonical_key(V), V) for V in candidates]
        scored.sort(key=lambda item: (item[0], item[1]))
        return scored[0][2], scored[0][0]

    def minimal_engulfing(self, W_list: Sequence[Subspace], eps: float) -> Tuple[Subspace, float]:
        """
        Finds an essentially minimal subspace almost containing every member

        Args:
            W_list: Nonempty family of subspaces of R^d
            eps: Base tolerance in (0, 1)

        Returns:
            (V, eps_d): every W satisfies W in V^(eps_d), and V has the least
            dimension k over the candidates with W in V^(eps_{d-k}) for all W.
            When eps_d >= 1 the flat tolerance eps replaces the cascade.
        """
        d = self._check_family(W_list)
        if eps >= 1.0:
            logger.warning(f"Engulfing tolerance {eps} >= 1: returning R^{d}")
            return Subspace.full(d), float(eps)
        eps_d = cascade_epsilon(eps, d)
        flat = eps_d >= 1.0
        if flat:
            logger.warning(f"Cascade constant eps_{d}={eps_d:.3g} >= 1; using the flat tolerance {eps}")
        for k in range(d + 1):
            tol = eps if flat else cascade_epsilon(eps, d - k)
            V, worst = self._best(W_list, self.candidates(W_list, k, d))
            if worst <= tol + 1e-12:
                return V, (eps if flat else eps_d)
        return Subspace.full(d), (eps if flat else eps_d)

    def _restrict(self, V: Subspace, W: Subspace, threshold: float) -> Subspace:
        """Directions of V within threshold of W"""
        cosines, vectors, _ = self.geometry.principal(V, W)
        sines = np.sqrt(np.clip(1.0 - cosines ** 2, 0.0, None))
        return Subspace.span(vectors[:, sines <= max(threshold, INTERSECTION_TOL)].T, V.d)

    def maximal_common(self, W_list: Sequence[Subspace], eps: float) -> Tuple[Subspace, List[Subspace], float]:
        """
        Finds an essentially maximal subspace almost contained in every member

        Starting from R^d, the current V is repeatedly cut down to the
        directions lying near the member it deviates from most; the members
        used are the witnesses.

        Args:
            W_list: Nonempty family of subspaces of R^d
            eps: Base tolerance

        Returns:
            (V, witnesses, delta) with V in W^(delta) for every W, at most
            d - dim V witnesses, and the intersection of the witnesses'
            eps-neighborhoods inside V^(delta)
        """
        d = self._check_family(W_list)
        delta = common_delta(eps, d)
        if delta >= 1.0:
            logger.warning(f"Common-subspace constant delta={delta:.3g} >= 1; every subspace qualifies")
            return Subspace.full(d), [], delta

        V = Subspace.full(d)
        witnesses: List[Subspace] = []
        for step in range(1, d + 2):
            deviations = [self.geometry.deviation(V, W) for W in W_list]
            worst = int(np.argmax(deviations))
            if deviations[worst] <= delta + 1e-12:
                break
            V = self._restrict(V, W_list[worst], min(cascade_epsilon(eps, step), delta))
            witnesses.append(W_list[worst])
            if V.k == 0:
                break
        return V, witnesses, delta
