"""
Saturation and concentration services module
Structural predicates of measures, measure subspaces and inverse-theorem verdicts
"""

from .interfaces import (
    PredicateInterface,
    MeasureSubspaceInterface,
    KVInterface,
    AffineInterface,
    VerdictInterface
)
from .predicate_service import PredicateService
from .measure_subspace_service import MeasureSubspaceService, concentration_cascade, saturation_tolerance
from .kv_service import KVService
from .affine_service import AffineService
from .verdict_service import VerdictService, ordered_map

__all__ = [
    # Interfaces
    'PredicateInterface',
    'MeasureSubspaceInterface',
    'KVInterface',
    'AffineInterface',
    'VerdictInterface',

    # Specialized services
    'PredicateService',
    'MeasureSubspaceService',
    'KVService',
    'AffineService',
    'VerdictService',

    # Helpers
    'concentration_cascade',
    'saturation_tolerance',
    'ordered_map',
]
