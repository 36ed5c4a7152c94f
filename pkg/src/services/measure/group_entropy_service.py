"""
Service for measures on the similarity group
Entropy over the partitions D_n^G and E_n^G, and the action nu.mu on lattice measures
"""
import logging
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.models.measure import LatticeMeasure, SimMeasure
from src.services.similitude import gcell_coords
from src.utils.helpers import DimensionMismatchError
from src.utils.numerics import dyadic_floor, entropy_bits, group_rows, row_labels
from .interfaces import GroupMeasureInterface
from .lattice_service import LatticeService

logger = logging.getLogger(__name__)


class GroupEntropyService(GroupMeasureInterface):
    """Entropies of measures on G and their push-forwards to R^d"""

    def __init__(self, lattice_service: LatticeService):
        self.lattice_service = lattice_service

    @staticmethod
    def _labels_entropy(keys: np.ndarray, weights: np.ndarray) -> float:
        return entropy_bits(np.bincount(row_labels(keys), weights=weights))

    def entropy_on_G(
        self,
        nu: SimMeasure,
        n: int,
        conditional_on_translation: bool = False,
        n_translation: Optional[int] = None,
    ) -> float:
        """
        Entropy of nu with respect to D_n^G

        Args:
            nu: Measure on G
            n: Level of the full partition
            conditional_on_translation: Condition on the translation partition
            n_translation: Level n' of E_n'^G (defaults to n)

        Returns:
            H(nu, D_n^G), or H(nu, D_n^G | E_n'^G) = H(nu, D_n^G v E_n'^G) - H(nu, E_n'^G)
        """
        coords = nu.coords()
        full = gcell_coords(coords, n)
        if not conditional_on_translation:
            return self._labels_entropy(full, nu.weights)
        level = n if n_translation is None else n_translation
        translation = gcell_coords(coords, level, translation_only=True)
        joint = self._labels_entropy(np.hstack((full, translation)), nu.weights)
        return joint - self._labels_entropy(translation, nu.weights)

    def translation_entropy(self, nu: SimMeasure, n: int) -> float:
        """H(nu, E_n^G)"""
        return self._labels_entropy(gcell_coords(nu.coords(), n, translation_only=True), nu.weights)

    def group_action(self, nu: SimMeasure, mu: LatticeMeasure, L_out: int) -> LatticeMeasure:
        """
        Computes nu.mu

        Args:
            nu: Measure on G
            mu: Lattice measure
            L_out: Output resolution

        Returns:
            sum_g nu(g) g mu on the level-L_out lattice
        """
        if nu.d != mu.d:
            raise DimensionMismatchError(f"measure on G acting on R^{nu.d} applied to R^{mu.d}")
        centers = mu.centers()
        rows_per_chunk = max(1, settings.CHUNK_SIZE // max(mu.size, 1))
        acc_cells = np.zeros((0, mu.d), dtype=np.int64)
        acc_weights = np.zeros(0)
        scales = 2.0 ** (-nu.ts)
        for start in range(0, nu.size, rows_per_chunk):
            stop = min(start + rows_per_chunk, nu.size)
            # images[g, x] = r_g U_g x + a_g
            images = np.einsum("gij,xj->gxi", nu.Us[start:stop], centers)
            images = images * scales[start:stop, None, None] + nu.As[start:stop, None, :]
            cells = dyadic_floor(images.reshape(-1, mu.d), L_out)
            weights = (nu.weights[start:stop, None] * mu.weights[None, :]).reshape(-1)
            acc_cells, acc_weights = group_rows(
                np.concatenate((acc_cells, cells)), np.concatenate((acc_weights, weights))
            )
        return self.lattice_service.build(acc_cells, acc_weights, mu.d, L_out)

    def orbit(self, nu: SimMeasure, x: np.ndarray, L_out: int) -> LatticeMeasure:
        """nu.x, the image of the point x under a random element of nu"""
        x = np.asarray(x, dtype=float)
        if x.shape != (nu.d,):
            raise DimensionMismatchError(f"point of dimension {x.shape} for a measure on G acting on R^{nu.d}")
        images = (2.0 ** (-nu.ts))[:, None] * np.einsum("gij,j->gi", nu.Us, x) + nu.As
        return self.lattice_service.build(dyadic_floor(images, L_out), nu.weights, nu.d, L_out)

    def group_components(self, nu: SimMeasure, k: int):
        """Level-k components of nu in D_k^G as (mass, component) in cell order"""
        labels = row_labels(gcell_coords(nu.coords(), k))
        result = []
        for label in range(int(labels.max()) + 1):
            rows = np.flatnonzero(labels == label)
            weights = nu.weights[rows]
            result.append((
                float(weights.sum()),
                SimMeasure(ts=nu.ts[rows], Us=nu.Us[rows], As=nu.As[rows], weights=weights / weights.sum()),
            ))
        return result
