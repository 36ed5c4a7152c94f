"""
Service for the metric geometry of linear subspaces
Principal angles, the Hausdorff metric on unit balls, neighborhoods and eigenspaces
"""
import logging
from typing import Sequence, Tuple

import numpy as np

from src.models.measure import CovSummary
from src.models.subspace import Subspace
from src.utils.helpers import DimensionMismatchError
from .interfaces import SubspaceGeometryInterface

logger = logging.getLogger(__name__)

CONTAINMENT_TOL = 1e-12
INTERSECTION_TOL = 1e-9


class SubspaceGeometryService(SubspaceGeometryInterface):
    """Geometry of the Grassmannians of R^d computed from orthonormal frames"""

    @staticmethod
    def _check(V: Subspace, W: Subspace) -> None:
        if V.d != W.d:
            raise DimensionMismatchError(f"subspaces of R^{V.d} and R^{W.d}")

    def deviation(self, V: Subspace, W: Subspace) -> float:
        """sup over unit v in V of dist(v, W) = ||(I - P_W) F_V||_op"""
        self._check(V, W)
        if V.k == 0:
            return 0.0
        residual = V.frame - W.frame @ (W.frame.T @ V.frame)
        return float(min(1.0, np.linalg.norm(residual, ord=2)))

    def sub_distance(self, V: Subspace, W: Subspace) -> float:
        """
        Hausdorff distance between V and W intersected with the unit ball

        Args:
            V: First subspace
            W: Second subspace

        Returns:
            max of the two directed deviations, 1 when one subspace has a
            direction orthogonal to the other
        """
        return max(self.deviation(V, W), self.deviation(W, V))

    def principal(self, V: Subspace, W: Subspace) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Principal decomposition of V relative to W

        Returns:
            (cosines, principal vectors of V as columns, partner vectors in W as columns);
            directions of V orthogonal to W have cosine 0 and a zero partner
        """
        self._check(V, W)
        if V.k == 0:
            return np.zeros(0), np.zeros((V.d, 0)), np.zeros((V.d, 0))
        if W.k == 0:
            return np.zeros(V.k), V.frame.copy(), np.zeros((V.d, V.k))
        Y, s, Zt = np.linalg.svd(W.frame.T @ V.frame, full_matrices=True)
        cosines = np.zeros(V.k)
        cosines[: s.shape[0]] = np.clip(s, 0.0, 1.0)
        vectors = V.frame @ Zt.T
        partners = np.zeros((V.d, V.k))
        count = min(V.k, W.k)
        partners[:, :count] = W.frame @ Y[:, :count]
        return cosines, vectors, partners

    def intersection(self, V: Subspace, W: Subspace, tol: float = INTERSECTION_TOL) -> Subspace:
        """V intersect W, principal directions with angle below tol"""
        cosines, vectors, _ = self.principal(V, W)
        sines = np.sqrt(np.clip(1.0 - cosines ** 2, 0.0, None))
        return Subspace.span(vectors[:, sines <= tol].T, V.d)

    def is_nested(self, V: Subspace, W: Subspace) -> bool:
        return self.deviation(V, W) <= INTERSECTION_TOL or self.deviation(W, V) <= INTERSECTION_TOL

    def complement_of(self, W0: Subspace, V: Subspace) -> Subspace:
        """V intersected with the orthogonal complement of W0"""
        if W0.k == 0:
            return V
        residual = V.frame - W0.frame @ (W0.frame.T @ V.frame)
        return Subspace.span(residual.T, V.d)

    def angle(self, V: Subspace, W: Subspace) -> float:
        """
        Angle between subspaces

        0 when one contains the other; otherwise the least distance between
        unit vectors of V and W lying orthogonal to W0 = V intersect W.
        """
        self._check(V, W)
        if self.is_nested(V, W):
            return 0.0
        W0 = self.intersection(V, W)
        V1, W1 = self.complement_of(W0, V), self.complement_of(W0, W)
        if V1.k == 0 or W1.k == 0:
            return 0.0
        largest_cosine = float(np.clip(np.linalg.norm(W1.frame.T @ V1.frame, ord=2), 0.0, 1.0))
        return float(np.sqrt(max(0.0, 2.0 - 2.0 * largest_cosine)))

    def in_neighborhood(self, V: Subspace, W: Subspace, eps: float) -> bool:
        """
        Checks V inside the eps-neighborhood of W on the unit ball

        Args:
            V: Subspace tested
            W: Target subspace
            eps: Radius, eps >= 0

        Returns:
            True when every unit vector of V lies within eps of W
        """
        if eps < 0:
            raise ValueError("neighborhood radius must be non-negative")
        return self.deviation(V, W) <= eps + CONTAINMENT_TOL

    def top_eigenspace(self, c: CovSummary, r: int) -> Subspace:
        """
        eigen_{1..r} of a covariance summary

        Args:
            c: Covariance summary with descending eigenvalues
            r: 0 <= r <= d

        Returns:
            Span of the eigenvectors whose eigenvalue is at least lambda_r; ties
            at lambda_r enlarge the span beyond r
        """
        d = c.d
        if not 0 <= r <= d:
            raise ValueError(f"r must lie in 0..{d}")
        if r == 0:
            return Subspace.zero(d)
        threshold = c.eigenvalue(r)
        tol = 1e-9 * max(c.eigenvalue(1), 1e-300)
        keep = c.eigenvalues >= threshold - tol
        return Subspace(d=d, frame=c.eigenvectors[:, keep])

    def orthogonal_complement(self, V: Subspace) -> Subspace:
        """
        Frame of V-perp

        Axis-aligned subspaces get the complementary coordinate axes so that
        projections onto V-perp reuse the ambient dyadic cells.
        """
        d = V.d
        if V.k == 0:
            return Subspace.full(d)
        if V.k == d:
            return Subspace.zero(d)
        axes = self.axis_indices(V)
        if axes is not None:
            return Subspace.axes(d, [i for i in range(d) if i not in axes])
        u, _, _ = np.linalg.svd(V.frame, full_matrices=True)
        return Subspace(d=d, frame=u[:, V.k:])

    def axis_indices(self, V: Subspace) -> Sequence[int]:
        """Indices i with V = span(e_i), or None when V is not a coordinate subspace"""
        diag = np.diag(V.projector())
        axes = [i for i in range(V.d) if diag[i] > 1.0 - 1e-12]
        if len(axes) == V.k and all(diag[i] < 1e-12 for i in range(V.d) if i not in axes):
            return axes
        return None

    def canonical_key(self, V: Subspace) -> Tuple[float, ...]:
        """Frame-independent key used for deterministic tie-breaking"""
        return (V.k, *np.round(V.projector(), 12).ravel().tolist())
