"""
Service for lattice measures
Snapping, dyadic entropies, components and push-forwards on the level-L lattice
"""
import logging
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.models.measure import EntropySuite, LatticeMeasure
from src.models.similitude import Similitude
from src.utils.helpers import DimensionMismatchError, EmptyMeasureError, ResolutionError, ZeroMassError
from src.utils.numerics import dyadic_floor, entropy_bits, group_rows, row_labels
from .interfaces import ComponentList, LatticeMeasureInterface

logger = logging.getLogger(__name__)


class LatticeService(LatticeMeasureInterface):
    """
    Service for probability measures on dyadic lattices of R^d
    Entropies are only available at levels n <= L
    """

    def build(self, cells: np.ndarray, weights: np.ndarray, d: int, L: int) -> LatticeMeasure:
        """
        Merges repeated cells and normalizes

        Args:
            cells: (N, d) integer cell indices, possibly repeated
            weights: (N,) non-negative weights
            d: Dimension
            L: Resolution level

        Returns:
            LatticeMeasure with sorted unique cells
        """
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, d)
        weights = np.asarray(weights, dtype=float)
        keep = weights > 0
        if not np.any(keep):
            raise EmptyMeasureError("no cell carries positive mass")
        unique, summed = group_rows(cells[keep], weights[keep])
        positive = summed > 0
        unique, summed = unique[positive], summed[positive]
        return LatticeMeasure(d=d, L=L, cells=unique, weights=summed / summed.sum())

    def make_lattice(self, points: np.ndarray, weights: Optional[Sequence[float]], L: int) -> LatticeMeasure:
        """
        Snaps weighted points to cells floor(2**L x)

        Args:
            points: (N, d) coordinates
            weights: Positive weights (uniform when None)
            L: Resolution level

        Returns:
            Normalized LatticeMeasure

        Raises:
            EmptyMeasureError: No atoms given
            ValueError: Non-finite coordinates or non-positive weights
        """
        points = np.asarray(points, dtype=float)
        if points.size == 0:
            raise EmptyMeasureError("cannot build a lattice measure from no atoms")
        if points.ndim == 1:
            points = points[:, None]
        if not np.all(np.isfinite(points)):
            raise ValueError("atom coordinates must be finite")
        if weights is None:
            weights = np.ones(points.shape[0])
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (points.shape[0],) or np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be positive, finite and one per atom")
        return self.build(dyadic_floor(points, L), weights, points.shape[1], L)

    def from_cells(self, cells: Sequence[Sequence[int]], weights: Optional[Sequence[float]], L: int) -> LatticeMeasure:
        """Builds a measure directly from integer cell indices"""
        cells = np.asarray(cells, dtype=np.int64)
        if cells.ndim == 1:
            cells = cells[:, None]
        if weights is None:
            weights = np.ones(cells.shape[0])
        return self.build(cells, np.asarray(weights, dtype=float), cells.shape[1], L)

    def coarse_cells(self, mu: LatticeMeasure, n: int) -> np.ndarray:
        """Level-n cell of every stored cell"""
        self._check_level(mu, n)
        return np.floor_divide(mu.cells, np.int64(2) ** (mu.L - n))

    def coarsen(self, mu: LatticeMeasure, n: int) -> LatticeMeasure:
        """The same measure stored at the coarser resolution n"""
        return self.build(self.coarse_cells(mu, n), mu.weights, mu.d, n)

    @staticmethod
    def _check_level(mu: LatticeMeasure, n: int) -> None:
        if n < 0:
            raise ValueError("level must be non-negative")
        if n > mu.L:
            raise ResolutionError(f"level {n} exceeds the lattice resolution {mu.L}")

    def entropy(self, mu: LatticeMeasure, n: int) -> float:
        """H(mu, D_n) in bits"""
        if n == mu.L:
            return entropy_bits(mu.weights)
        labels = row_labels(self.coarse_cells(mu, n))
        return entropy_bits(np.bincount(labels, weights=mu.weights))

    def joint_entropy(self, mu: LatticeMeasure, keys: np.ndarray) -> float:
        """Entropy of the partition whose atoms are the distinct rows of keys"""
        return entropy_bits(np.bincount(row_labels(keys), weights=mu.weights))

    def normalized_entropy(self, mu: LatticeMeasure, n: int) -> float:
        """H_n(mu) = H(mu, D_n) / n (the raw entropy at n = 0)"""
        return self.entropy(mu, n) / max(n, 1)

    def entropy_suite(self, mu: LatticeMeasure, n: int, m: Optional[int] = None) -> EntropySuite:
        """
        Entropies at level n

        Args:
            mu: Lattice measure
            n: Level, n <= L
            m: Optional coarser level, m <= n

        Returns:
            EntropySuite with H, H_n and H(mu, D_n | D_m)

        Raises:
            ResolutionError: n > L
        """
        self._check_level(mu, n)
        H = self.entropy(mu, n)
        H_cond = None
        if m is not None:
            if m > n:
                raise ValueError(f"conditioning level {m} exceeds {n}")
            H_cond = H - self.entropy(mu, m)
        return EntropySuite(n=n, H=H, H_n=H / max(n, 1), m=m, H_cond=H_cond)

    def conditional_entropy(self, mu: LatticeMeasure, n: int, m: int) -> float:
        """H(mu, D_n | D_m)"""
        return self.entropy(mu, n) - self.entropy(mu, m)

    def _grouped(self, mu: LatticeMeasure, i: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        coarse = self.coarse_cells(mu, i)
        labels = row_labels(coarse)
        order = np.argsort(labels, kind="stable")
        bounds = np.flatnonzero(np.diff(labels[order])) + 1
        starts = np.concatenate(([0], bounds))
        ends = np.concatenate((bounds, [len(order)]))
        return coarse, order, np.stack((starts, ends), axis=1)

    def _component_from_rows(self, mu: LatticeMeasure, rows: np.ndarray, coarse_cell: np.ndarray,
                             i: int, rescaled: bool) -> LatticeMeasure:
        weights = mu.weights[rows]
        weights = weights / weights.sum()
        if rescaled:
            cells = mu.cells[rows] - coarse_cell * (np.int64(2) ** (mu.L - i))
            return LatticeMeasure(d=mu.d, L=mu.L - i, cells=cells, weights=weights)
        return LatticeMeasure(d=mu.d, L=mu.L, cells=mu.cells[rows], weights=weights)

    def component(self, mu: LatticeMeasure, cell: Sequence[int], i: int, rescaled: bool = True) -> LatticeMeasure:
        """
        Component of mu on a level-i cell

        Args:
            mu: Lattice measure
            cell: Level-i cell index
            i: Level, i <= L
            rescaled: Push forward to [0,1)^d (resolution L - i) instead of restricting in place

        Returns:
            Normalized component

        Raises:
            ZeroMassError: The cell carries no mass
        """
        coarse_cell = np.asarray(cell, dtype=np.int64)
        if coarse_cell.shape != (mu.d,):
            raise DimensionMismatchError(f"cell index must have {mu.d} entries")
        rows = np.flatnonzero(np.all(self.coarse_cells(mu, i) == coarse_cell, axis=1))
        if rows.size == 0:
            raise ZeroMassError(f"cell {tuple(coarse_cell)} at level {i} has zero mass")
        return self._component_from_rows(mu, rows, coarse_cell, i, rescaled)

    def components(self, mu: LatticeMeasure, i: int, rescaled: bool = True) -> ComponentList:
        """All level-i components as (cell, mass, component), cells in lexicographic order"""
        coarse, order, ranges = self._grouped(mu, i)
        result = []
        for start, end in ranges:
            rows = np.sort(order[start:end])
            cell = coarse[rows[0]]
            mass = float(mu.weights[rows].sum())
            result.append((tuple(int(c) for c in cell), mass,
                           self._component_from_rows(mu, rows, cell, i, rescaled)))
        return result

    def component_expectation(
        self,
        mu: LatticeMeasure,
        levels: Iterable[int],
        f: Callable[[LatticeMeasure], float],
        rescaled: bool = True,
    ) -> float:
        """
        Exact expectation over random components

        Args:
            mu: Lattice measure
            levels: Levels I, each <= L
            f: Functional evaluated on each component
            rescaled: Pass rescaled (True) or raw (False) components to f

        Returns:
            (1/|I|) sum_i sum_D mu(D) f(mu^D)
        """
        levels = list(levels)
        if not levels:
            raise ValueError("at least one level is required")
        total = 0.0
        for i in levels:
            self._check_level(mu, i)
            total += sum(mass * float(f(comp)) for _, mass, comp in self.components(mu, i, rescaled))
        return total / len(levels)

    def component_probability(
        self,
        mu: LatticeMeasure,
        levels: Iterable[int],
        predicate: Callable[[LatticeMeasure], bool],
        rescaled: bool = True,
    ) -> float:
        """Probability that a random component satisfies predicate"""
        return self.component_expectation(mu, levels, lambda comp: 1.0 if predicate(comp) else 0.0, rescaled)

    def average_component_entropy(self, mu: LatticeMeasure, levels: Iterable[int], m: int) -> float:
        """
        E_{i in I} H_m(mu^{x,i}) through the identity
        sum_D mu(D) H(mu^D, D_m) = H(mu, D_{i+m} | D_i)
        """
        levels = list(levels)
        total = 0.0
        for i in levels:
            if i + m > mu.L:
                raise ResolutionError(f"level {i} + scale {m} exceeds the lattice resolution {mu.L}")
            total += self.conditional_entropy(mu, i + m, i) / m
        return total / len(levels)

    def mixture(self, measures: Sequence[LatticeMeasure], alphas: Sequence[float]) -> LatticeMeasure:
        """Convex combination sum alpha_i mu_i of measures on a common lattice"""
        if not measures:
            raise EmptyMeasureError("mixture of no measures")
        d, L = measures[0].d, measures[0].L
        if any(mu.d != d or mu.L != L for mu in measures):
            raise DimensionMismatchError("mixture components must share dimension and resolution")
        alphas = np.asarray(alphas, dtype=float)
        cells = np.concatenate([mu.cells for mu in measures])
        weights = np.concatenate([a * mu.weights for a, mu in zip(alphas, measures)])
        return self.build(cells, weights, d, L)

    def pushforward(self, g: Similitude, mu: LatticeMeasure, L_out: int) -> LatticeMeasure:
        """
        Push-forward by g of the cell-center atomization, re-snapped at L_out

        The center atomization moves mass by at most half a cell diagonal,
        so the result is accurate to O(2**-L) before re-snapping.
        """
        if g.d != mu.d:
            raise DimensionMismatchError(f"map on R^{g.d} applied to a measure on R^{mu.d}")
        images = g.r * (mu.centers() @ g.U.T) + g.a
        return self.build(dyadic_floor(images, L_out), mu.weights, mu.d, L_out)

    def entropy_table(self, mu: LatticeMeasure, levels: Iterable[int], m: Optional[int] = None) -> List[EntropySuite]:
        """Rows (n, H, H_n, H_cond) for CSV export; H_cond is left empty at levels below m"""
        return [self.entropy_suite(mu, n, None if m is None or m > n else m) for n in levels]
