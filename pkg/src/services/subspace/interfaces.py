"""
Interfaces for subspace services
"""
from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

from src.models.measure import CovSummary
from src.models.subspace import Subspace


class SubspaceGeometryInterface(ABC):
    """Interface for the metric geometry of linear subspaces"""

    @abstractmethod
    def sub_distance(self, V: Subspace, W: Subspace) -> float:
        """Hausdorff distance between the unit-ball intersections"""
        pass

    @abstractmethod
    def angle(self, V: Subspace, W: Subspace) -> float:
        """Angle between V and W modulo their intersection"""
        pass

    @abstractmethod
    def in_neighborhood(self, V: Subspace, W: Subspace, eps: float) -> bool:
        """True when V intersected with the unit ball lies in the eps-neighborhood of W"""
        pass

    @abstractmethod
    def top_eigenspace(self, c: CovSummary, r: int) -> Subspace:
        """Span of the eigenvectors with eigenvalue >= lambda_r"""
        pass


class SubspaceSelectorInterface(ABC):
    """Interface for subspace selection from families of subspaces"""

    @abstractmethod
    def minimal_engulfing(self, W_list: Sequence[Subspace], eps: float) -> Tuple[Subspace, float]:
        """Essentially minimal subspace almost containing every member"""
        pass

    @abstractmethod
    def maximal_common(self, W_list: Sequence[Subspace], eps: float) -> Tuple[Subspace, List[Subspace], float]:
        """Essentially maximal subspace almost contained in every member, with witnesses"""
        pass
