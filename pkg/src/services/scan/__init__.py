"""
Parameter scan services module
Families t -> Phi_t, transversality rank, exceptional covers and sweeps
"""

from .param_scan_service import ParamScanService
from .interfaces import (
    FamilyInterface,
    TransversalityInterface,
    CoverInterface,
    ScanInterface
)
from .family_service import FamilyService
from .transversality_service import TransversalityService, image_of_origin
from .cover_service import CoverService, grid_cells, min_sup_distance
from .scan_service import DIAGNOSTIC_COLUMNS, ScanService, grid_points

__all__ = [
    # Main service
    'ParamScanService',

    # Interfaces
    'FamilyInterface',
    'TransversalityInterface',
    'CoverInterface',
    'ScanInterface',

    # Specialized services
    'FamilyService',
    'TransversalityService',
    'CoverService',
    'ScanService',

    # Helpers
    'DIAGNOSTIC_COLUMNS',
    'grid_cells',
    'grid_points',
    'image_of_origin',
    'min_sup_distance',
]
