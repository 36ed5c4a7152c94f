"""
Batch run services module
Configuration checks, command dispatch and table output
"""

from .run_service import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, RunService, guarded
from .interfaces import (
    ValidationInterface,
    OutputInterface,
    RunInterface
)
from .validation_service import ValidationService, parse_depths
from .output_service import OutputService

__all__ = [
    # Main service
    'RunService',

    # Interfaces
    'ValidationInterface',
    'OutputInterface',
    'RunInterface',

    # Specialized services
    'ValidationService',
    'OutputService',

    # Helpers
    'EXIT_OK',
    'EXIT_INVALID',
    'EXIT_BUDGET',
    'guarded',
    'parse_depths',
]
