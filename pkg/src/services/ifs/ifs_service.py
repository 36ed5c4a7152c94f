"""
Main IFS service
Orchestrates the system catalog, composition, separation and dimension services
"""
import logging
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

import numpy as np

from src.models.ifs import EntropyDiagnostics, IFSSystem, OverlapResult, SeparationResult, SliceEntropy, Word
from src.models.measure import LatticeMeasure, SimMeasure
from src.models.similitude import Similitude
from src.models.subspace import Subspace
from src.services.measure import MeasureService
from src.services.satcon import PredicateService
from src.services.subspace import SubspaceGeometryService
from .composition_service import CompositionService
from .dimension_service import DimensionService
from .separation_service import SeparationService
from .system_service import SystemService

logger = logging.getLogger(__name__)


class IFSService:
    """
    Main service for iterated function systems
    Delegates to specialized services
    """

    def __init__(self, measure_service: Optional[MeasureService] = None):
        self.measure_service = measure_service or MeasureService()
        self.system_service = SystemService()
        self.composition_service = CompositionService()
        self.separation_service = SeparationService(self.composition_service)
        predicates = PredicateService(self.measure_service.lattice_service, SubspaceGeometryService())
        self.dimension_service = DimensionService(self.composition_service, self.measure_service, predicates)

    # Systems
    def get_system(self, name: str) -> IFSSystem:
        return self.system_service.get(name)

    def resolve_system(self, source: str, loader: Optional[Callable[[str], Dict[str, Any]]] = None) -> IFSSystem:
        return self.system_service.resolve(source, loader)

    def system_from_json(self, data: Dict[str, Any]) -> IFSSystem:
        return self.system_service.from_json(data)

    # Compositions
    def compositions(self, ifs: IFSSystem, n: int) -> Iterator[Tuple[Word, Similitude, float]]:
        return self.composition_service.compositions(ifs, n)

    def nu_n(self, ifs: IFSSystem, n: int) -> SimMeasure:
        return self.composition_service.nu_n(ifs, n)

    # Separation
    def delta_n(self, ifs: IFSSystem, n: int) -> SeparationResult:
        return self.separation_service.delta_n(ifs, n)

    def exact_overlaps(self, ifs: IFSSystem, n_max: int) -> Optional[OverlapResult]:
        return self.separation_service.exact_overlaps(ifs, n_max)

    # Dimension
    def sdim(self, ifs: IFSSystem, mode: str = "set") -> float:
        return self.dimension_service.sdim(ifs, mode)

    def mean_contraction(self, ifs: IFSSystem) -> float:
        return self.dimension_service.mean_contraction(ifs)

    def n_prime(self, ifs: IFSSystem, n: int) -> int:
        return self.dimension_service.n_prime(ifs, n)

    def nu_tilde(self, ifs: IFSSystem, n: int, x: Optional[np.ndarray] = None,
                 L_out: Optional[int] = None) -> LatticeMeasure:
        return self.dimension_service.nu_tilde(ifs, n, x, L_out)

    def dim_estimate(self, ifs: IFSSystem, n: int, L_out: Optional[int] = None) -> float:
        return self.dimension_service.dim_estimate(ifs, n, L_out)

    def entropy_diagnostics(self, ifs: IFSSystem, n: int, q: float) -> EntropyDiagnostics:
        return self.dimension_service.entropy_diagnostics(ifs, n, q)

    def slice_entropy(self, ifs: IFSSystem, V: Subspace, n: int, p_scale: int,
                      L: Optional[int] = None) -> SliceEntropy:
        return self.dimension_service.slice_entropy(ifs, V, n, p_scale, L)
