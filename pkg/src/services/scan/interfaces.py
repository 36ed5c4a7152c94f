"""
Interfaces for parametrized family services
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.family import CoverReport, ParamFamily, ScanRow
from src.models.ifs import IFSSystem, Word


class FamilyInterface(ABC):
    """Interface for registered families t -> Phi_t"""

    @abstractmethod
    def make(self, family_id: str, lower: Optional[Sequence[float]] = None,
             upper: Optional[Sequence[float]] = None,
             constants: Optional[Dict[str, Any]] = None) -> ParamFamily:
        """Validated family over a domain box (the registered default box when omitted)"""
        pass

    @abstractmethod
    def build(self, family: ParamFamily, t: Sequence[float]) -> IFSSystem:
        """The system Phi_t; raises DomainError outside the domain"""
        pass


class TransversalityInterface(ABC):
    """Interface for Delta_{i,j}(t) and its derivative rank"""

    @abstractmethod
    def delta_ij_t(self, family: ParamFamily, i: Word, j: Word, t: Sequence[float]) -> np.ndarray:
        """phi_i(0) - phi_j(0) for the system at t"""
        pass

    @abstractmethod
    def jacobian_rank(self, family: ParamFamily, i: Word, j: Word, t: Sequence[float],
                      h: Optional[float] = None, tol: Optional[float] = None) -> Tuple[int, np.ndarray]:
        """Numerical rank of the d x m derivative of Delta_{i,j} at t"""
        pass


class CoverInterface(ABC):
    """Interface for exceptional parameter covers"""

    @abstractmethod
    def exceptional_cover(self, family: ParamFamily, n: int, eps: float, grid_step: float,
                          threads: Optional[int] = None) -> CoverReport:
        """Grid cells where two level-n compositions send 0 to within eps**n"""
        pass


class ScanInterface(ABC):
    """Interface for parameter sweeps"""

    @abstractmethod
    def scan(self, family: ParamFamily, points: Sequence[Sequence[float]],
             diagnostics: List[Dict[str, Any]], threads: Optional[int] = None) -> List[ScanRow]:
        """One row of diagnostics per grid point, in grid order"""
        pass
