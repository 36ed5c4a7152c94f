"""
Service for separation of compositions
Delta_n through a spatial hash on the (t, a) coordinates and exact overlap detection
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.models.ifs import IFSSystem, OverlapResult, SeparationResult
from src.utils.numerics import close_pairs
from .composition_service import CompositionArrays, CompositionService
from .interfaces import SeparationInterface

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


def pair_distances(arrays: CompositionArrays, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """sim_distance between the compositions at rows i and j"""
    dU = arrays.Us[i] - arrays.Us[j]
    if dU.shape[1] == 1:
        op = np.abs(dU[:, 0, 0])
    else:
        op = np.linalg.norm(dU, ord=2, axis=(1, 2))
    return np.abs(arrays.ts[i] - arrays.ts[j]) + op + np.linalg.norm(arrays.As[i] - arrays.As[j], axis=1)


class SeparationService(SeparationInterface):
    """
    Separation of level-n compositions

    Pairs at sim_distance <= w differ by at most w in t and in every
    translation coordinate, so with buckets of side w only neighboring
    buckets on the (t, a) coordinates need to be compared.
    """

    def __init__(self, composition_service: CompositionService):
        self.composition_service = composition_service

    @staticmethod
    def _first_duplicate(keys) -> Optional[Tuple[int, int]]:
        """Lexicographically least (i, j), i < j, with keys[i] == keys[j]"""
        first_seen = {}
        best = None
        for index, key in enumerate(keys):
            if key in first_seen:
                pair = (first_seen[key], index)
                if best is None or pair < best:
                    best = pair
            else:
                first_seen[key] = index
        return best

    @staticmethod
    def _float_duplicate(arrays: CompositionArrays) -> Optional[Tuple[int, int]]:
        _, first, inverse = np.unique(arrays.coords(), axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        repeated = np.flatnonzero(first[inverse] != np.arange(arrays.size))
        if repeated.size == 0:
            return None
        pairs = sorted((int(first[inverse[k]]), int(k)) for k in repeated)
        return pairs[0]

    @staticmethod
    def _upper_bound(arrays: CompositionArrays) -> float:
        keys = arrays.ts + arrays.As.sum(axis=1)
        order = np.argsort(keys, kind="stable")
        return float(pair_distances(arrays, order[:-1], order[1:]).min())

    def _hash_pass(self, arrays: CompositionArrays, width: float) -> List[np.ndarray]:
        coords = np.hstack((arrays.ts[:, None], arrays.As))
        buckets = np.floor(coords / width).astype(np.int64)
        found: List[np.ndarray] = []
        for p, q in close_pairs(buckets):
            for start in range(0, p.shape[0], settings.CHUNK_SIZE):
                pi, qi = p[start:start + settings.CHUNK_SIZE], q[start:start + settings.CHUNK_SIZE]
                dist = pair_distances(arrays, pi, qi)
                close = dist <= width
                if np.any(close):
                    found.append(np.stack((dist[close], np.minimum(pi, qi)[close], np.maximum(pi, qi)[close]), axis=1))
        return found

    def delta_n(self, ifs: IFSSystem, n: int) -> SeparationResult:
        """
        Minimal distance between distinct level-n compositions

        Args:
            ifs: The system
            n: Depth

        Returns:
            SeparationResult with Delta_n and the lexicographically least
            closest pair of words; Delta_n is infinite when there is a single word

        Raises:
            BudgetExceededError: |Lambda|**n exceeds the budget
        """
        arrays = self.composition_service.arrays(ifs, n)
        return self._delta(arrays, n)

    def _delta(self, arrays: CompositionArrays, n: int) -> SeparationResult:
        if arrays.size < 2:
            return SeparationResult(n=n, delta=float("inf"))
        duplicate = self._first_duplicate(p.key for p in arrays.exact) if arrays.exact is not None \
            else self._float_duplicate(arrays)
        if duplicate is not None:
            i, j = duplicate
            return SeparationResult(n=n, delta=0.0, word_i=arrays.word(i), word_j=arrays.word(j))

        width = self._upper_bound(arrays)
        extent = np.abs(np.hstack((arrays.ts[:, None], arrays.As))).max()
        if extent / width > 2.0 ** 60:
            logger.warning(f"Bucket side {width:.3g} too small for the hash; comparing all pairs")
            return self._brute(arrays, n)
        found = self._hash_pass(arrays, width)
        table = np.vstack(found)
        best = table[:, 0].min()
        ties = table[table[:, 0] <= best + TIE_TOL * best]
        pick = np.lexsort((ties[:, 2], ties[:, 1]))[0]
        i, j = int(ties[pick, 1]), int(ties[pick, 2])
        return SeparationResult(n=n, delta=float(best), word_i=arrays.word(i), word_j=arrays.word(j))

    def brute_force_delta(self, ifs: IFSSystem, n: int) -> SeparationResult:
        """Delta_n over all pairs; meant for small systems"""
        return self._brute(self.composition_service.arrays(ifs, n), n)

    @staticmethod
    def _brute(arrays: CompositionArrays, n: int) -> SeparationResult:
        if arrays.size < 2:
            return SeparationResult(n=n, delta=float("inf"))
        best, pair = float("inf"), None
        for i in range(arrays.size - 1):
            j = np.arange(i + 1, arrays.size)
            dist = pair_distances(arrays, np.full(j.shape[0], i), j)
            k = int(np.argmin(dist))
            if pair is None or dist[k] < best * (1.0 - TIE_TOL):
                best, pair = float(dist[k]), (i, int(j[k]))
        return SeparationResult(n=n, delta=best, word_i=arrays.word(pair[0]), word_j=arrays.word(pair[1]))

    def exact_overlaps(self, ifs: IFSSystem, n_max: int) -> Optional[OverlapResult]:
        """
        First level with two distinct words giving the same map

        Rational systems are compared exactly; otherwise two maps coincide
        when their distance is at most settings.EXACT_TOL and the result is
        flagged as numeric.

        Args:
            ifs: The system
            n_max: Largest depth examined

        Returns:
            OverlapResult or None when no overlap occurs up to n_max
        """
        for n in range(1, n_max + 1):
            arrays = self.composition_service.arrays(ifs, n)
            if arrays.exact is not None:
                duplicate = self._first_duplicate(p.key for p in arrays.exact)
                if duplicate is not None:
                    return OverlapResult(n=n, word_i=arrays.word(duplicate[0]), word_j=arrays.word(duplicate[1]))
                continue
            result = self._delta(arrays, n)
            if result.delta <= settings.EXACT_TOL:
                logger.info(f"Numerically coincident compositions of {ifs.name} at depth {n}")
                return OverlapResult(n=n, word_i=result.word_i, word_j=result.word_j, exact=False)
        return None
