"""
Service for structural predicates of lattice measures
Concentration near translates of a subspace, uniformity and saturation
"""
import logging
from typing import Tuple

import numpy as np

from src.models.measure import LatticeMeasure
from src.models.subspace import Subspace
from src.services.measure import LatticeService
from src.services.subspace import SubspaceGeometryService
from src.utils.helpers import DimensionMismatchError, ResolutionError
from src.utils.numerics import dyadic_floor, entropy_bits, row_labels
from .interfaces import PredicateInterface

logger = logging.getLogger(__name__)

MASS_TOL = 1e-12
DIST_TOL = 1e-12
SEED_ATOMS = 32
MEAN_SHIFT_ROUNDS = 20


class PredicateService(PredicateInterface):
    """
    Predicates of the multiscale structure theory
    Projections use an orthonormal frame of V-perp
    """

    def __init__(self, lattice_service: LatticeService, geometry_service: SubspaceGeometryService):
        self.lattice_service = lattice_service
        self.geometry = geometry_service

    @staticmethod
    def _check(mu: LatticeMeasure, V: Subspace) -> None:
        if mu.d != V.d:
            raise DimensionMismatchError(f"measure on R^{mu.d} with a subspace of R^{V.d}")

    def projected(self, mu: LatticeMeasure, V: Subspace) -> Tuple[np.ndarray, Subspace]:
        """Coordinates of the cell centers in the frame of V-perp"""
        perp = self.geometry.orthogonal_complement(V)
        return mu.centers() @ perp.frame, perp

    def projected_cells(self, mu: LatticeMeasure, V: Subspace, level: int) -> np.ndarray:
        """Level cells of pi_{V-perp} of every stored cell, in V-perp coordinates"""
        self._check(mu, V)
        if level > mu.L:
            raise ResolutionError(f"level {level} exceeds the lattice resolution {mu.L}")
        coords, perp = self.projected(mu, V)
        if perp.k == 0:
            return np.zeros((mu.size, 0), dtype=np.int64)
        axes = self.geometry.axis_indices(perp)
        if axes is not None:
            # coordinate projections reuse the ambient cells exactly
            return np.floor_divide(mu.cells[:, axes], np.int64(2) ** (mu.L - level))
        return dyadic_floor(coords, level)

    def projection_entropy(self, mu: LatticeMeasure, V: Subspace, m: int) -> float:
        """
        H_m(pi_{V-perp} mu)

        Args:
            mu: Lattice measure
            V: Subspace whose orthogonal complement is the projection target
            m: Scale, m <= L

        Returns:
            Normalized entropy of the projected centers re-snapped at level m
        """
        keys = self.projected_cells(mu, V, m)
        return entropy_bits(np.bincount(row_labels(keys), weights=mu.weights)) / max(m, 1)

    @staticmethod
    def _window_1d(y: np.ndarray, w: np.ndarray, eps: float) -> Tuple[float, float]:
        order = np.argsort(y, kind="stable")
        ys, ws = y[order], w[order]
        cumulative = np.concatenate(([0.0], np.cumsum(ws)))
        ends = np.searchsorted(ys, ys + 2.0 * eps + DIST_TOL, side="right")
        masses = cumulative[ends] - cumulative[np.arange(ys.shape[0])]
        best = int(np.argmax(masses))
        return float(masses[best]), float((ys[best] + ys[ends[best] - 1]) / 2.0)

    @staticmethod
    def _ball_mass(y: np.ndarray, w: np.ndarray, center: np.ndarray, eps: float) -> Tuple[float, np.ndarray]:
        inside = np.linalg.norm(y - center, axis=1) <= eps + DIST_TOL
        return float(w[inside].sum()), inside

    def _ball_search(self, y: np.ndarray, w: np.ndarray, eps: float) -> Tuple[float, np.ndarray]:
        seeds = [w @ y]
        heaviest = np.argsort(-w, kind="stable")[:SEED_ATOMS]
        seeds.extend(y[i] for i in heaviest)
        best_mass, best_center = -1.0, seeds[0]
        for seed in seeds:
            center = np.asarray(seed, dtype=float)
            for _ in range(MEAN_SHIFT_ROUNDS):
                mass, inside = self._ball_mass(y, w, center, eps)
                if mass > best_mass + MASS_TOL:
                    best_mass, best_center = mass, center
                if mass <= 0:
                    break
                shifted = (w[inside] @ y[inside]) / mass
                if np.allclose(shifted, center, atol=1e-15):
                    break
                center = shifted
        return best_mass, best_center

    def best_translate(self, mu: LatticeMeasure, V: Subspace, eps: float) -> Tuple[float, np.ndarray]:
        """
        Largest mass of an eps-neighborhood of a translate of V

        Codimension 1 uses an exact sliding window; higher codimension uses
        mean-shift refinement from the mean and the heaviest atoms.

        Returns:
            (mass, translate vector in V-perp)
        """
        self._check(mu, V)
        coords, perp = self.projected(mu, V)
        if perp.k == 0:
            return 1.0, np.zeros(mu.d)
        if perp.k == 1:
            mass, center = self._window_1d(coords[:, 0], mu.weights, eps)
            return mass, perp.frame[:, 0] * center
        mass, center = self._ball_search(coords, mu.weights, eps)
        return mass, perp.frame @ center

    def is_concentrated(self, mu: LatticeMeasure, V: Subspace, eps: float) -> Tuple[bool, np.ndarray]:
        """
        Concentration test

        Args:
            mu: Lattice measure
            V: Subspace
            eps: Tolerance

        Returns:
            (True when some translate W of V has mu(W^(eps)) >= 1 - eps, witness translate)
        """
        mass, translate = self.best_translate(mu, V, eps)
        return mass >= 1.0 - eps - MASS_TOL, translate

    def is_uniform(self, mu: LatticeMeasure, V: Subspace, eps: float, m: int) -> bool:
        if m > mu.L:
            raise ResolutionError(f"scale {m} exceeds the lattice resolution {mu.L}")
        concentrated, _ = self.is_concentrated(mu, V, 2.0 ** (-m))
        return concentrated and self.lattice_service.normalized_entropy(mu, m) > V.k - eps

    def saturation_gap(self, mu: LatticeMeasure, V: Subspace, m: int) -> float:
        """H_m(mu) - dim V - H_m(pi_{V-perp} mu); saturation at eps means gap >= -eps"""
        if m > mu.L:
            raise ResolutionError(f"scale {m} exceeds the lattice resolution {mu.L}")
        return self.lattice_service.normalized_entropy(mu, m) - V.k - self.projection_entropy(mu, V, m)

    def is_saturated(self, mu: LatticeMeasure, V: Subspace, eps: float, m: int) -> bool:
        """
        Saturation test

        Args:
            mu: Lattice measure
            V: Subspace
            eps: Tolerance
            m: Scale, m <= L

        Returns:
            True when H_m(mu) >= dim V + H_m(pi_{V-perp} mu) - eps
        """
        self._check(mu, V)
        return self.saturation_gap(mu, V, m) >= -eps - MASS_TOL
