"""
Main parameter scan service
Orchestrates families, transversality, covers and sweeps
"""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.family import CoverReport, ParamFamily, ScanRow
from src.models.ifs import IFSSystem, Word
from src.services.ifs import IFSService
from .cover_service import CoverService
from .family_service import FamilyService
from .scan_service import ScanService, grid_points
from .transversality_service import TransversalityService

logger = logging.getLogger(__name__)


class ParamScanService:
    """
    Main service for parametrized families
    Delegates to specialized services
    """

    def __init__(self, ifs_service: Optional[IFSService] = None):
        self.ifs_service = ifs_service or IFSService()
        self.family_service = FamilyService(self.ifs_service.system_service)
        self.transversality = TransversalityService(self.family_service)
        self.cover_service = CoverService(self.family_service, self.ifs_service.composition_service,
                                          self.transversality)
        self.scan_service = ScanService(self.family_service, self.ifs_service)

    # Families
    def make_family(self, family_id: str, lower: Optional[Sequence[float]] = None,
                    upper: Optional[Sequence[float]] = None,
                    constants: Optional[Dict[str, Any]] = None) -> ParamFamily:
        return self.family_service.make(family_id, lower, upper, constants)

    def build(self, family: ParamFamily, t: Sequence[float]) -> IFSSystem:
        return self.family_service.build(family, t)

    # Transversality
    def delta_ij_t(self, family: ParamFamily, i: Word, j: Word, t: Sequence[float]) -> np.ndarray:
        return self.transversality.delta_ij_t(family, i, j, t)

    def jacobian_rank(self, family: ParamFamily, i: Word, j: Word, t: Sequence[float],
                      h: Optional[float] = None, tol: Optional[float] = None) -> Tuple[int, np.ndarray]:
        return self.transversality.jacobian_rank(family, i, j, t, h, tol)

    # Covers
    def exceptional_cover(self, family: ParamFamily, n: int, eps: float, grid_step: float,
                          threads: Optional[int] = None, budget: Optional[int] = None) -> CoverReport:
        return self.cover_service.exceptional_cover(family, n, eps, grid_step, threads, budget)

    def covering_bound(self, family: ParamFamily, alphabet: int, n: int, rank: int, delta: float,
                       grid_step: float) -> float:
        return self.cover_service.covering_bound(family, alphabet, n, rank, delta, grid_step)

    # Sweeps
    def grid_points(self, family: ParamFamily, counts: Sequence[int]) -> List[List[float]]:
        return grid_points(family, counts)

    def scan(self, family: ParamFamily, points: Sequence[Sequence[float]],
             diagnostics: List[Dict[str, Any]], threads: Optional[int] = None) -> List[ScanRow]:
        return self.scan_service.scan(family, points, diagnostics, threads)
