"""
Service for exceptional parameter covers
Grid cells on which two distinct level-n compositions send the origin to nearly the same point
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.models.family import CoverCell, CoverReport, ParamFamily
from src.services.ifs import CompositionService
from src.services.satcon import ordered_map
from src.utils.helpers import BudgetExceededError, DomainError
from src.utils.numerics import close_pairs
from .family_service import FamilyService
from .interfaces import CoverInterface
from .transversality_service import TransversalityService

logger = logging.getLogger(__name__)


def min_sup_distance(points: np.ndarray) -> float:
    """
    Minimal sup-norm distance between two rows of points

    Rows closer than the sorted-neighbor upper bound w differ by at most w in
    every coordinate, so only adjacent buckets of side w are compared.
    """
    if points.shape[0] < 2:
        return float("inf")
    if np.unique(points, axis=0).shape[0] < points.shape[0]:
        return 0.0
    order = np.argsort(points.sum(axis=1), kind="stable")
    width = float(np.abs(points[order[1:]] - points[order[:-1]]).max(axis=1).min())
    if width == 0.0:
        return 0.0
    if np.abs(points).max() / width > 2.0 ** 60:
        logger.warning(f"Sup distance {width:.3g} below the hash resolution; reporting the sorted-neighbor bound")
        return width
    buckets = np.floor(points / width).astype(np.int64)
    best = width
    for p, q in close_pairs(buckets):
        if p.size:
            best = min(best, float(np.abs(points[p] - points[q]).max(axis=1).min()))
    return best


def grid_cells(family: ParamFamily, grid_step: float) -> Tuple[List[List[int]], np.ndarray]:
    """Indices and centers of the grid cells of side grid_step covering the domain box"""
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    axes = []
    for lo, hi in zip(family.lower, family.upper):
        count = max(1, int(math.ceil((hi - lo) / grid_step - 1e-9)))
        axes.append(np.minimum(lo + (np.arange(count) + 0.5) * grid_step, hi))
    mesh = np.meshgrid(*[np.arange(len(a)) for a in axes], indexing="ij")
    indices = np.stack([m.reshape(-1) for m in mesh], axis=1)
    centers = np.stack([axes[k][indices[:, k]] for k in range(family.m)], axis=1)
    return indices.tolist(), centers


class CoverService(CoverInterface):
    """Counts of near-coincidence cells and the reference covering bound"""

    def __init__(self, family_service: FamilyService, composition_service: CompositionService,
                 transversality: TransversalityService):
        self.family_service = family_service
        self.composition_service = composition_service
        self.transversality = transversality

    @staticmethod
    def covering_bound(family: ParamFamily, alphabet: int, n: int, rank: int, delta: float,
                       grid_step: float) -> float:
        """
        |Lambda|**(2n) times the reference count vol(domain) * delta**-(m - rank)

        delta is floored at the grid step, the resolution of the cover.
        """
        radius = max(delta, grid_step)
        volume = float(np.prod([max(hi - lo, grid_step) for lo, hi in zip(family.lower, family.upper)]))
        codim = max(family.m - rank, 0)
        return float(alphabet) ** (2 * n) * volume * radius ** (-codim)

    def _reference_rank(self, family: ParamFamily, alphabet: int, n: int) -> int:
        """Derivative rank at the domain center for the pair 11...1 / 21...1"""
        if alphabet < 2 or n < 1:
            return 0
        center = (np.asarray(family.lower) + np.asarray(family.upper)) / 2.0
        i = tuple([0] * n)
        j = (1,) + tuple([0] * (n - 1))
        try:
            rank, _ = self.transversality.jacobian_rank(family, i, j, center)
        except DomainError:
            logger.warning(f"Domain of {family.family_id} too thin for the derivative stencil; rank taken as 0")
            return 0
        return rank

    def exceptional_cover(self, family: ParamFamily, n: int, eps: float, grid_step: float,
                          threads: Optional[int] = None, budget: Optional[int] = None) -> CoverReport:
        """
        Cells whose center t has min ||Delta_{i,j}(t)||_inf < eps**n over
        distinct level-n words

        Args:
            family: The family
            n: Word length
            eps: Base of the threshold eps**n
            grid_step: Cell side
            threads: Worker count (settings.THREADS by default)
            budget: Limit on |Lambda|**n times the number of cells

        Returns:
            CoverReport with one CoverCell per grid cell in grid order

        Raises:
            BudgetExceededError: Too many evaluations
        """
        if n < 1:
            raise ValueError("n must be positive")
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        indices, centers = grid_cells(family, grid_step)
        first_system = self.family_service.build(family, centers[0])
        limit = settings.BUDGET if budget is None else budget
        work = first_system.size ** n * len(indices)
        if work > limit:
            logger.error(f"Cover of {len(indices)} cells at depth {n} needs {work} evaluations, budget {limit}")
            raise BudgetExceededError(f"{work} evaluations exceed the budget {limit}")

        threshold = eps ** n
        logger.info(f"Scanning {len(indices)} cells of {family.family_id} at depth {n}, threshold {threshold:.3g}")

        def evaluate(k: int) -> CoverCell:
            ifs = self.family_service.build(family, centers[k])
            arrays = self.composition_service.arrays(ifs, n, budget=limit, exact=False)
            distance = min_sup_distance(arrays.As)
            return CoverCell(index=indices[k], center=centers[k].tolist(), min_distance=distance,
                             hit=distance < threshold)

        cells = ordered_map(evaluate, range(len(indices)), threads or settings.THREADS)
        rank = self._reference_rank(family, first_system.size, n)
        hit_count = sum(cell.hit for cell in cells)
        logger.info(f"Cover of {family.family_id}: {hit_count}/{len(cells)} cells hit")
        return CoverReport(
            n=n,
            epsilon=eps,
            grid_step=grid_step,
            hit_count=hit_count,
            grid_cells=len(cells),
            bound=self.covering_bound(family, first_system.size, n, rank, threshold, grid_step),
            rank=rank,
            cells=cells,
        )
