"""
Interfaces for iterated function system services
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np

from src.models.ifs import EntropyDiagnostics, IFSSystem, OverlapResult, SeparationResult, SliceEntropy, Word
from src.models.measure import LatticeMeasure, SimMeasure
from src.models.similitude import Similitude
from src.models.subspace import Subspace


class SystemCatalogInterface(ABC):
    """Interface for built-in and file-defined systems"""

    @abstractmethod
    def get(self, name: str) -> IFSSystem:
        """Resolves a built-in system name such as "cantor3" or "bernoulli(0.5,0.6)" """
        pass

    @abstractmethod
    def from_json(self, data: Dict[str, Any]) -> IFSSystem:
        """Parses {d, maps: [{t|r, U, a}], probs}"""
        pass


class CompositionInterface(ABC):
    """Interface for enumerating compositions of an IFS"""

    @abstractmethod
    def compositions(self, ifs: IFSSystem, n: int) -> Iterator[Tuple[Word, Similitude, float]]:
        """All level-n compositions in lexicographic word order"""
        pass

    @abstractmethod
    def nu_n(self, ifs: IFSSystem, n: int) -> SimMeasure:
        """nu^(n) with exactly equal compositions merged"""
        pass


class SeparationInterface(ABC):
    """Interface for separation and overlap detection"""

    @abstractmethod
    def delta_n(self, ifs: IFSSystem, n: int) -> SeparationResult:
        """Minimal distance between distinct level-n compositions"""
        pass

    @abstractmethod
    def exact_overlaps(self, ifs: IFSSystem, n_max: int) -> Optional[OverlapResult]:
        """First level with two words giving the same map"""
        pass


class DimensionInterface(ABC):
    """Interface for dimensions and entropy diagnostics of self-similar measures"""

    @abstractmethod
    def sdim(self, ifs: IFSSystem, mode: str = "set") -> float:
        """Similarity dimension of the attractor or of the measure"""
        pass

    @abstractmethod
    def nu_tilde(self, ifs: IFSSystem, n: int, x: Optional[np.ndarray] = None,
                 L_out: Optional[int] = None) -> LatticeMeasure:
        """Level-n approximation of the self-similar measure"""
        pass

    @abstractmethod
    def entropy_diagnostics(self, ifs: IFSSystem, n: int, q: float) -> EntropyDiagnostics:
        """Normalized G-entropies A, B and the orbit entropy C"""
        pass

    @abstractmethod
    def slice_entropy(self, ifs: IFSSystem, V: Subspace, n: int, p_scale: int) -> SliceEntropy:
        """Local entropy averages of projections and fibers"""
        pass
