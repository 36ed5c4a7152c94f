"""
Similitude services module
Arithmetic, metric and dyadic partitions of the similarity group
"""

from .interfaces import (
    SimilitudeAlgebraInterface,
    SimilitudeMetricInterface,
    GroupPartitionInterface
)
from .similitude_service import SimilitudeService, compose_exact, gcell_coords

__all__ = [
    # Main service
    'SimilitudeService',

    # Interfaces
    'SimilitudeAlgebraInterface',
    'SimilitudeMetricInterface',
    'GroupPartitionInterface',

    # Helpers
    'compose_exact',
    'gcell_coords',
]
