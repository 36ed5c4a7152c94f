"""
IFS services module
Named systems, compositions, separation, overlaps and entropy dimensions
"""

from .ifs_service import IFSService
from .interfaces import (
    SystemCatalogInterface,
    CompositionInterface,
    SeparationInterface,
    DimensionInterface
)
from .system_service import (
    SystemService,
    fat_sierpinski_threshold,
    garsia_root,
    natural_probs,
    similarity_dimension
)
from .composition_service import CompositionArrays, CompositionService
from .separation_service import SeparationService, pair_distances
from .dimension_service import DimensionService

__all__ = [
    # Main service
    'IFSService',

    # Interfaces
    'SystemCatalogInterface',
    'CompositionInterface',
    'SeparationInterface',
    'DimensionInterface',

    # Specialized services
    'SystemService',
    'CompositionService',
    'SeparationService',
    'DimensionService',

    # Helpers
    'CompositionArrays',
    'pair_distances',
    'fat_sierpinski_threshold',
    'garsia_root',
    'natural_probs',
    'similarity_dimension',
]
