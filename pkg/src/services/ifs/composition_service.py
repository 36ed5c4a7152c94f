"""
Service for enumerating compositions of an iterated function system
"""
import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np

from src.config.settings import settings
from src.models.ifs import IFSSystem, Word
from src.models.measure import SimMeasure
from src.models.similitude import ExactParts, Similitude
from src.services.similitude import compose_exact
from src.utils.helpers import BudgetExceededError
from .interfaces import CompositionInterface

logger = logging.getLogger(__name__)


class CompositionArrays:
    """All level-n compositions phi_w = phi_{w_1} o ... o phi_{w_n} in lexicographic word order"""

    def __init__(self, n: int, alphabet: int, ts: np.ndarray, Us: np.ndarray, As: np.ndarray,
                 weights: np.ndarray, exact: Optional[List[ExactParts]] = None):
        self.n = n
        self.alphabet = alphabet
        self.ts = ts
        self.Us = Us
        self.As = As
        self.weights = weights
        self.exact = exact

    @property
    def size(self) -> int:
        return int(self.ts.shape[0])

    def coords(self) -> np.ndarray:
        """(N, 1 + d*d + d) embedding (t, U row-major, a)"""
        return np.hstack((self.ts[:, None], self.Us.reshape(self.size, -1), self.As))

    def word(self, index: int) -> Word:
        """0-based word of the composition stored at index"""
        digits = []
        for _ in range(self.n):
            index, digit = divmod(index, self.alphabet)
            digits.append(digit)
        return tuple(reversed(digits))

    def words(self) -> np.ndarray:
        indices = np.arange(self.size, dtype=np.int64)
        columns = []
        for _ in range(self.n):
            indices, digit = np.divmod(indices, self.alphabet)
            columns.append(digit)
        return np.stack(columns[::-1], axis=1) if columns else np.zeros((self.size, 0), dtype=np.int64)


class CompositionService(CompositionInterface):
    """Level-by-level enumeration of compositions, vectorized over words"""

    def __init__(self, budget: Optional[int] = None):
        self.budget = budget

    def check_budget(self, ifs: IFSSystem, n: int, budget: Optional[int] = None) -> int:
        """Number of level-n words; raises when it exceeds the budget (settings.BUDGET unless set)"""
        if n < 0:
            raise ValueError("composition depth must be non-negative")
        limit = budget if budget is not None else self.budget or settings.BUDGET
        count = ifs.size ** n
        if count > limit:
            logger.error(f"{ifs.size}**{n} = {count} compositions exceed the budget {limit}")
            raise BudgetExceededError(f"{count} compositions exceed the budget {limit}")
        return count

    def arrays(self, ifs: IFSSystem, n: int, budget: Optional[int] = None,
               exact: Optional[bool] = None) -> CompositionArrays:
        """
        Enumerates all level-n compositions

        Args:
            ifs: The system
            n: Depth
            budget: Maximum number of compositions (settings.BUDGET by default)
            exact: Also compose the rational forms (default: when every map is rational)

        Returns:
            CompositionArrays in lexicographic word order

        Raises:
            BudgetExceededError: |Lambda|**n exceeds the budget
        """
        count = self.check_budget(ifs, n, budget)
        if count > 2 ** 16:
            logger.info(f"Enumerating {count} compositions of {ifs.name} at depth {n}")
        d = ifs.d
        use_exact = ifs.is_exact if exact is None else exact and ifs.is_exact

        map_t = np.array([g.t for g in ifs.maps])
        map_U = np.stack([g.U for g in ifs.maps])
        map_a = np.stack([g.a for g in ifs.maps])

        ts, Us, As = np.zeros(1), np.eye(d)[None, :, :], np.zeros((1, d))
        weights = np.ones(1)
        exact_parts = [Similitude.identity(d).exact] if use_exact else None
        for _ in range(n):
            # phi_w o phi_j for every word w (major) and letter j (minor)
            r_w = 2.0 ** (-ts)
            ts = (ts[:, None] + map_t[None, :]).reshape(-1)
            As = (As[:, None, :] + r_w[:, None, None] * np.einsum("wik,jk->wji", Us, map_a)).reshape(-1, d)
            Us = np.einsum("wik,jkl->wjil", Us, map_U).reshape(-1, d, d)
            weights = (weights[:, None] * ifs.probs[None, :]).reshape(-1)
            if use_exact:
                exact_parts = [compose_exact(w, g.exact) for w in exact_parts for g in ifs.maps]
        return CompositionArrays(n, ifs.size, ts, Us, As, weights, exact_parts)

    def compositions(self, ifs: IFSSystem, n: int) -> Iterator[Tuple[Word, Similitude, float]]:
        """
        Streams level-n compositions

        Yields:
            (0-based word, composed similitude, weight p_word) in lexicographic order
        """
        arrays = self.arrays(ifs, n)
        for index in range(arrays.size):
            exact = arrays.exact[index] if arrays.exact is not None else None
            g = Similitude(t=float(arrays.ts[index]), U=arrays.Us[index], a=arrays.As[index], exact=exact)
            yield arrays.word(index), g, float(arrays.weights[index])

    def nu_n(self, ifs: IFSSystem, n: int) -> SimMeasure:
        """
        nu^(n) = sum_w p_w delta_{phi_w}

        Exactly equal compositions are merged: rationally equal forms for
        rational systems, bitwise equal float embeddings otherwise. Each atom
        keeps the lexicographically first word that produced it.
        """
        arrays = self.arrays(ifs, n)
        if arrays.exact is not None:
            first_index = {}
            labels = np.empty(arrays.size, dtype=np.int64)
            for index, parts in enumerate(arrays.exact):
                labels[index] = first_index.setdefault(parts.key, len(first_index))
        else:
            _, first, labels = np.unique(arrays.coords(), axis=0, return_index=True, return_inverse=True)
            labels = labels.reshape(-1)
            # relabel by first occurrence so atoms follow word order
            rank = np.empty(first.shape[0], dtype=np.int64)
            rank[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
            labels = rank[labels]

        count = int(labels.max()) + 1
        representatives = np.full(count, arrays.size, dtype=np.int64)
        np.minimum.at(representatives, labels, np.arange(arrays.size))
        weights = np.bincount(labels, weights=arrays.weights, minlength=count)
        return SimMeasure(
            ts=arrays.ts[representatives],
            Us=arrays.Us[representatives],
            As=arrays.As[representatives],
            weights=weights / weights.sum(),
            words=arrays.words()[representatives],
        )
