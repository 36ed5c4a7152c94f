"""
Service for convolution of lattice measures
Sparse pairwise accumulation with a dense FFT path for large products
"""
import logging

import numpy as np

from src.config.settings import settings
from src.models.measure import LatticeMeasure
from src.utils.helpers import DimensionMismatchError
from src.utils.numerics import group_rows
from .interfaces import ConvolutionInterface
from .lattice_service import LatticeService

logger = logging.getLogger(__name__)

# Dense results below this mass are FFT round-off
DENSE_CUTOFF = 1e-14
DENSE_MAX_VOLUME = 2 ** 26
SPARSE_MAX_PAIRS = 2 ** 24


class ConvolutionService(ConvolutionInterface):
    """
    Convolution on the integer lattice of cell indices
    (mu * nu)(c) = sum over a + b = c of mu(a) nu(b)
    """

    def __init__(self, lattice_service: LatticeService):
        self.lattice_service = lattice_service

    def _common_resolution(self, mu: LatticeMeasure, nu: LatticeMeasure):
        if mu.d != nu.d:
            raise DimensionMismatchError(f"cannot convolve measures on R^{mu.d} and R^{nu.d}")
        if mu.L == nu.L:
            return mu, nu
        L = min(mu.L, nu.L)
        logger.info(f"Re-resolving convolution operands to the common level {L}")
        return self.lattice_service.coarsen(mu, L), self.lattice_service.coarsen(nu, L)

    @staticmethod
    def _dense_volume(mu: LatticeMeasure, nu: LatticeMeasure) -> int:
        spans = (np.ptp(mu.cells, axis=0) + 1) + (np.ptp(nu.cells, axis=0) + 1) - 1
        return int(np.prod(spans.astype(float)))

    def _choose(self, mu: LatticeMeasure, nu: LatticeMeasure, method: str) -> str:
        if method not in ("auto", "sparse", "dense"):
            raise ValueError(f"unknown convolution method {method}")
        if method != "auto":
            return method
        if mu.size * nu.size > SPARSE_MAX_PAIRS and self._dense_volume(mu, nu) <= DENSE_MAX_VOLUME:
            return "dense"
        return "sparse"

    def _sparse(self, mu: LatticeMeasure, nu: LatticeMeasure) -> LatticeMeasure:
        chunk_rows = max(1, settings.CHUNK_SIZE // max(nu.size, 1))
        acc_cells = np.zeros((0, mu.d), dtype=np.int64)
        acc_weights = np.zeros(0)
        for start in range(0, mu.size, chunk_rows):
            stop = min(start + chunk_rows, mu.size)
            sums = (mu.cells[start:stop, None, :] + nu.cells[None, :, :]).reshape(-1, mu.d)
            products = (mu.weights[start:stop, None] * nu.weights[None, :]).reshape(-1)
            acc_cells, acc_weights = group_rows(
                np.concatenate((acc_cells, sums)), np.concatenate((acc_weights, products))
            )
        return self.lattice_service.build(acc_cells, acc_weights, mu.d, mu.L)

    @staticmethod
    def _dense_grid(mu: LatticeMeasure, shape) -> np.ndarray:
        grid = np.zeros(shape)
        offsets = mu.cells - mu.cells.min(axis=0)
        np.add.at(grid, tuple(offsets.T), mu.weights)
        return grid

    def _from_dense(self, values: np.ndarray, low: np.ndarray, d: int, L: int) -> LatticeMeasure:
        keep = values > DENSE_CUTOFF
        cells = np.argwhere(keep) + low
        return self.lattice_service.build(cells, values[keep], d, L)

    def _dense(self, mu: LatticeMeasure, nu: LatticeMeasure) -> LatticeMeasure:
        span_mu = np.ptp(mu.cells, axis=0) + 1
        span_nu = np.ptp(nu.cells, axis=0) + 1
        shape = tuple(int(s) for s in span_mu + span_nu - 1)
        spectrum = np.fft.rfftn(self._dense_grid(mu, span_mu), s=shape) * np.fft.rfftn(
            self._dense_grid(nu, span_nu), s=shape
        )
        values = np.fft.irfftn(spectrum, s=shape)
        return self._from_dense(values, mu.cells.min(axis=0) + nu.cells.min(axis=0), mu.d, mu.L)

    def convolve(self, mu: LatticeMeasure, nu: LatticeMeasure, method: str = "auto") -> LatticeMeasure:
        """
        Convolves two lattice measures

        Args:
            mu: First measure
            nu: Second measure (re-resolved to the coarser level when they differ)
            method: "sparse", "dense" or "auto"

        Returns:
            mu * nu on the common lattice

        Raises:
            DimensionMismatchError: Different ambient dimensions
        """
        mu, nu = self._common_resolution(mu, nu)
        if self._choose(mu, nu, method) == "dense":
            return self._dense(mu, nu)
        return self._sparse(mu, nu)

    def self_convolve(self, mu: LatticeMeasure, k: int, method: str = "auto") -> LatticeMeasure:
        """
        k-fold convolution power

        Args:
            mu: Lattice measure
            k: Number of factors, k >= 1 (k = 0 gives the point mass at cell 0)
            method: "sparse" (repeated squaring), "dense" (one FFT power) or "auto"

        Returns:
            mu^(*k)
        """
        if k < 0:
            raise ValueError("convolution power must be non-negative")
        if k == 0:
            return self.lattice_service.from_cells(np.zeros((1, mu.d), dtype=np.int64), [1.0], mu.L)
        if k == 1:
            return mu
        span = np.ptp(mu.cells, axis=0) + 1
        volume = float(np.prod((k * (span - 1) + 1).astype(float)))
        if method == "dense" or (method == "auto" and volume <= DENSE_MAX_VOLUME and mu.size ** 2 > SPARSE_MAX_PAIRS):
            shape = tuple(int(s) for s in k * (span - 1) + 1)
            spectrum = np.fft.rfftn(self._dense_grid(mu, span), s=shape) ** k
            values = np.fft.irfftn(spectrum, s=shape)
            return self._from_dense(values, k * mu.cells.min(axis=0), mu.d, mu.L)

        result = None
        power = mu
        remaining = k
        while remaining:
            if remaining & 1:
                result = power if result is None else self._sparse(result, power)
            remaining >>= 1
            if remaining:
                power = self._sparse(power, power)
        return result
