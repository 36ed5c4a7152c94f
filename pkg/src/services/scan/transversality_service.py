"""
Service for Delta_{i,j}(t) = phi_i(0) - phi_j(0) over a parametrized family
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from src.config.settings import settings
from src.models.family import ParamFamily
from src.models.ifs import IFSSystem, Word
from src.utils.helpers import DomainError
from .family_service import FamilyService
from .interfaces import TransversalityInterface

logger = logging.getLogger(__name__)


def image_of_origin(ifs: IFSSystem, word: Word) -> np.ndarray:
    """phi_{w_1} o ... o phi_{w_n} (0)"""
    x = np.zeros(ifs.d)
    for letter in reversed(word):
        g = ifs.maps[letter]
        x = g.r * (g.U @ x) + g.a
    return x


class TransversalityService(TransversalityInterface):
    """Differences of composed images of the origin and their finite-difference derivatives"""

    def __init__(self, family_service: FamilyService):
        self.family_service = family_service

    @staticmethod
    def _check_words(ifs: IFSSystem, i: Word, j: Word) -> None:
        if len(i) != len(j):
            raise ValueError(f"words of different lengths {len(i)} and {len(j)}")
        if any(not 0 <= letter < ifs.size for letter in tuple(i) + tuple(j)):
            raise ValueError(f"word letters must lie in 0..{ifs.size - 1}")

    def delta_ij_t(self, family: ParamFamily, i: Word, j: Word, t: Sequence[float]) -> np.ndarray:
        """
        Delta_{i,j}(t) = phi_i(0) - phi_j(0)

        Args:
            family: The family
            i: 0-based word
            j: 0-based word of the same length
            t: Parameter inside the domain

        Returns:
            d-vector

        Raises:
            DomainError: t outside the domain
        """
        ifs = self.family_service.build(family, t)
        self._check_words(ifs, i, j)
        return image_of_origin(ifs, i) - image_of_origin(ifs, j)

    def jacobian_rank(self, family: ParamFamily, i: Word, j: Word, t: Sequence[float],
                      h: Optional[float] = None, tol: Optional[float] = None) -> Tuple[int, np.ndarray]:
        """
        Rank of D Delta_{i,j}(t) by central differences

        Args:
            family: The family
            i: 0-based word
            j: 0-based word of the same length
            t: Parameter at least h inside the domain
            h: Step (settings.FD_STEP by default)
            tol: Relative singular value threshold (settings.FD_TOL by default)

        Returns:
            (rank, singular values in decreasing order); rank counts the
            singular values above tol * max(1, sigma_max)

        Raises:
            DomainError: The stencil leaves the domain
        """
        h = settings.FD_STEP if h is None else h
        tol = settings.FD_TOL if tol is None else tol
        t = np.asarray(t, dtype=float)
        if not family.contains(t, margin=h):
            logger.error(f"Stencil of width {h} around {t.tolist()} leaves the domain of {family.family_id}")
            raise DomainError(f"parameter {t.tolist()} is not {h} inside the domain")

        columns = []
        for axis in range(family.m):
            step = np.zeros(family.m)
            step[axis] = h
            forward = self.delta_ij_t(family, i, j, t + step)
            backward = self.delta_ij_t(family, i, j, t - step)
            columns.append((forward - backward) / (2.0 * h))
        jacobian = np.stack(columns, axis=1)
        singular = np.linalg.svd(jacobian, compute_uv=False)
        scale = max(1.0, float(singular[0])) if singular.size else 1.0
        rank = int(np.sum(singular > tol * scale))
        return rank, singular
