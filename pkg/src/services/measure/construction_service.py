"""
Service for standard lattice measures
Uniform cubes, segments, point masses and multiscale arithmetic progressions
"""
import itertools
import logging
from typing import Sequence

import numpy as np

from src.models.measure import LatticeMeasure
from .lattice_service import LatticeService

logger = logging.getLogger(__name__)


class MeasureConstructionService:
    """Builders for the measures used by checks, examples and tests"""

    def __init__(self, lattice_service: LatticeService):
        self.lattice_service = lattice_service

    def point_mass(self, d: int, L: int, x: Sequence[float] = None) -> LatticeMeasure:
        point = np.zeros(d) if x is None else np.asarray(x, dtype=float)
        return self.lattice_service.make_lattice(point[None, :], [1.0], L)

    def uniform_cube(self, d: int, L: int) -> LatticeMeasure:
        """Uniform measure on the 2**(L*d) cells of [0,1)^d"""
        side = np.arange(2 ** L, dtype=np.int64)
        grids = np.meshgrid(*([side] * d), indexing="ij")
        cells = np.stack([g.reshape(-1) for g in grids], axis=1)
        return self.lattice_service.from_cells(cells, None, L)

    def segment(self, d: int, L: int, axis: int = 0, cells_long: int = None) -> LatticeMeasure:
        """Uniform measure on [0,1) x {0}^(d-1) along the given axis (first cells_long cells)"""
        count = 2 ** L if cells_long is None else cells_long
        cells = np.zeros((count, d), dtype=np.int64)
        cells[:, axis] = np.arange(count)
        return self.lattice_service.from_cells(cells, None, L)

    def ap_cascade(self, lengths: Sequence[int], gaps: Sequence[float], L: int, d: int = 1) -> LatticeMeasure:
        """
        Multiscale arithmetic progression

        Stage j contributes an AP of lengths[j] points with gap gaps[j]; each point
        of a stage is replaced by the AP of the next stage. The result is uniform
        on the sums sum_j k_j * gaps[j], 0 <= k_j < lengths[j], placed on the first
        axis and snapped at level L.

        Args:
            lengths: AP lengths n_1, n_2, ...
            gaps: Gaps eps_1 > eps_2 > ...
            L: Resolution level
            d: Ambient dimension

        Returns:
            Uniform lattice measure on the cascade
        """
        if len(lengths) != len(gaps) or not lengths:
            raise ValueError("one gap per stage is required")
        stages = [np.arange(n) * g for n, g in zip(lengths, gaps)]
        positions = np.array([sum(combo) for combo in itertools.product(*stages)])
        points = np.zeros((positions.shape[0], d))
        points[:, 0] = positions
        logger.info(f"AP cascade with {positions.shape[0]} points at level {L}")
        return self.lattice_service.make_lattice(points, None, L)

    def circle(self, L: int, atoms: int, radius: float = 0.25, center: Sequence[float] = (0.5, 0.5)) -> LatticeMeasure:
        """Equally weighted points on a circle in R^2"""
        angles = 2.0 * np.pi * np.arange(atoms) / atoms
        points = np.asarray(center) + radius * np.stack((np.cos(angles), np.sin(angles)), axis=1)
        return self.lattice_service.make_lattice(points, None, L)
