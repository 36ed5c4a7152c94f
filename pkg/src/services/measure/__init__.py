"""
Measure services module
Lattice measures, convolution, moments and measures on the similarity group
"""

from .measure_service import MeasureService
from .interfaces import (
    LatticeMeasureInterface,
    ConvolutionInterface,
    MomentInterface,
    GroupMeasureInterface
)
from .lattice_service import LatticeService
from .convolution_service import ConvolutionService
from .moment_service import MomentService
from .group_entropy_service import GroupEntropyService
from .construction_service import MeasureConstructionService

__all__ = [
    # Main service
    'MeasureService',

    # Interfaces
    'LatticeMeasureInterface',
    'ConvolutionInterface',
    'MomentInterface',
    'GroupMeasureInterface',

    # Specialized services
    'LatticeService',
    'ConvolutionService',
    'MomentService',
    'GroupEntropyService',
    'MeasureConstructionService',
]
