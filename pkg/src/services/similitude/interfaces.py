"""
Interfaces for similitude services
Contracts for group arithmetic, the metric on G and its dyadic partitions
"""
from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from src.models.similitude import GCellId, Similitude


class SimilitudeAlgebraInterface(ABC):
    """Interface for composition and evaluation of similitudes"""

    @abstractmethod
    def compose(self, g: Similitude, h: Similitude) -> Similitude:
        """Returns the map x -> g(h(x))"""
        pass

    @abstractmethod
    def apply(self, g: Similitude, x: np.ndarray) -> np.ndarray:
        """Evaluates g at a point (or at each row of an array)"""
        pass

    @abstractmethod
    def scale_map(self, t: float, d: int = 1) -> Similitude:
        """Returns S_t, x -> 2**t x"""
        pass

    @abstractmethod
    def inverse(self, g: Similitude) -> Similitude:
        """Returns g^-1"""
        pass


class SimilitudeMetricInterface(ABC):
    """Interface for the metric on the similarity group"""

    @abstractmethod
    def sim_distance(self, g: Similitude, h: Similitude) -> float:
        """|log r_g - log r_h| + ||U_g - U_h||_op + ||a_g - a_h||"""
        pass


class GroupPartitionInterface(ABC):
    """Interface for the dyadic partitions D_n^G and E_n^G"""

    @abstractmethod
    def dyadic_cells_G(self, g: Similitude, n: int) -> Tuple[GCellId, GCellId]:
        """Returns the (full, translation-only) level-n cells of g"""
        pass
