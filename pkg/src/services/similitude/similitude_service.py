"""
Service for arithmetic on the similarity group
Composition (float and exact rational), evaluation, the metric on G and dyadic G-cells
"""
import logging
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from src.models.similitude import ExactParts, GCellId, Similitude
from src.utils.helpers import DimensionMismatchError
from src.utils.numerics import dyadic_floor
from .interfaces import GroupPartitionInterface, SimilitudeAlgebraInterface, SimilitudeMetricInterface

logger = logging.getLogger(__name__)


def _frac_matmul(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0])))
        for i in range(len(A))
    )


def _frac_matvec(A: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(sum((A[i][k] * x[k] for k in range(len(x))), Fraction(0)) for i in range(len(A)))


def compose_exact(g: ExactParts, h: ExactParts) -> ExactParts:
    """Rational composition g o h"""
    rotated = _frac_matvec(g.U, h.a)
    return ExactParts(
        r=g.r * h.r,
        U=_frac_matmul(g.U, h.U),
        a=tuple(ag + g.r * ra for ag, ra in zip(g.a, rotated)),
    )


def gcell_coords(coords: np.ndarray, n: int, translation_only: bool = False) -> np.ndarray:
    """
    Level-n G-cell coordinates of rows in the (t, U row-major, a) embedding

    Args:
        coords: (N, 1 + d*d + d) array
        n: Dyadic level
        translation_only: Keep only the translation block (partition E_n^G)

    Returns:
        (N, k) int64 array of cell indices
    """
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    if translation_only:
        width = coords.shape[1]
        d = int(round((-1 + np.sqrt(1 + 4 * (width - 1))) / 2))
        coords = coords[:, width - d:]
    return dyadic_floor(coords, n)


class SimilitudeService(SimilitudeAlgebraInterface, SimilitudeMetricInterface, GroupPartitionInterface):
    """
    Service for the similarity group G and the isometry group G_0
    All operations are pure and safe to share between workers
    """

    @staticmethod
    def _check_dims(g: Similitude, h: Similitude) -> None:
        if g.d != h.d:
            raise DimensionMismatchError(f"similitudes act on R^{g.d} and R^{h.d}")

    def compose(self, g: Similitude, h: Similitude) -> Similitude:
        """
        Composes two similitudes

        Args:
            g: Outer map
            h: Inner map

        Returns:
            x -> g(h(x)), exact when both operands carry rational forms

        Raises:
            DimensionMismatchError: Operands act on different spaces
        """
        self._check_dims(g, h)
        exact = compose_exact(g.exact, h.exact) if g.exact is not None and h.exact is not None else None
        return Similitude(
            t=g.t + h.t,
            U=g.U @ h.U,
            a=g.a + g.r * (g.U @ h.a),
            exact=exact,
        )

    def apply(self, g: Similitude, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != g.d:
            raise DimensionMismatchError(f"point of dimension {x.shape[-1]} for a map on R^{g.d}")
        return g.r * (x @ g.U.T) + g.a

    def scale_map(self, t: float, d: int = 1) -> Similitude:
        """S_t as a similitude with log-contraction -t"""
        return Similitude(t=-float(t), U=np.eye(d), a=np.zeros(d))

    def inverse(self, g: Similitude) -> Similitude:
        inv_r = 2.0 ** g.t
        return Similitude(t=-g.t, U=g.U.T, a=-inv_r * (g.U.T @ g.a))

    def translation(self, a: Sequence[float]) -> Similitude:
        a = np.asarray(a, dtype=float)
        return Similitude(t=0.0, U=np.eye(a.shape[0]), a=a)

    def rotation(self, theta: float, center: Sequence[float] = (0.0, 0.0)) -> Similitude:
        """Planar rotation by theta about a center"""
        c, s = np.cos(theta), np.sin(theta)
        U = np.array([[c, -s], [s, c]])
        center = np.asarray(center, dtype=float)
        return Similitude(t=0.0, U=U, a=center - U @ center)

    def op_norm(self, A: np.ndarray) -> float:
        """Largest singular value"""
        A = np.atleast_2d(A)
        if A.size == 0:
            return 0.0
        return float(np.linalg.norm(A, ord=2))

    def sim_distance(self, g: Similitude, h: Similitude) -> float:
        """
        Distance between similitudes

        Args:
            g: First similitude
            h: Second similitude

        Returns:
            |log2 r_g - log2 r_h| + ||U_g - U_h||_op + ||a_g - a_h||_2

        Raises:
            DimensionMismatchError: Operands act on different spaces
        """
        self._check_dims(g, h)
        return float(abs(g.t - h.t) + self.op_norm(g.U - h.U) + np.linalg.norm(g.a - h.a))

    def dyadic_cells_G(self, g: Similitude, n: int) -> Tuple[GCellId, GCellId]:
        if n < 0:
            raise ValueError("level must be non-negative")
        full = gcell_coords(g.coords, n)[0]
        translation = gcell_coords(g.coords, n, translation_only=True)[0]
        return (
            GCellId(level=n, coords=tuple(int(c) for c in full)),
            GCellId(level=n, coords=tuple(int(c) for c in translation)),
        )

    def equal(self, g: Similitude, h: Similitude, tol: float = 1e-12) -> bool:
        """Exact equality when both are rational, otherwise distance below tol"""
        if g.exact is not None and h.exact is not None:
            return g.exact.key == h.exact.key
        return self.sim_distance(g, h) <= tol
