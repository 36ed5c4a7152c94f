"""
Subspace services module
Metric geometry of linear subspaces and constructive subspace selectors
"""

from .interfaces import (
    SubspaceGeometryInterface,
    SubspaceSelectorInterface
)
from .geometry_service import SubspaceGeometryService
from .selector_service import SubspaceSelectorService, cascade_epsilon, common_delta

__all__ = [
    # Interfaces
    'SubspaceGeometryInterface',
    'SubspaceSelectorInterface',

    # Specialized services
    'SubspaceGeometryService',
    'SubspaceSelectorService',

    # Constants
    'cascade_epsilon',
    'common_delta',
]
