"""
Common utilities and helpers
Exception hierarchy and JSON file handling shared by every service
"""
import json
import logging
import os
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class ValidationError(Exception):
    """Custom exception for validation errors"""
    pass


class FractalEntropyError(Exception):
    """Base class for numeric domain errors"""
    pass


class DimensionMismatchError(FractalEntropyError):
    """Operands live in different ambient dimensions"""
    pass


class ResolutionError(FractalEntropyError):
    """A scale finer than the stored lattice resolution was requested"""
    pass


class BudgetExceededError(FractalEntropyError):
    """An enumeration would exceed the configured budget"""
    pass


class ZeroMassError(FractalEntropyError):
    """A component was requested for a cell carrying no mass"""
    pass


class EmptyMeasureError(FractalEntropyError):
    """A measure was built from no atoms"""
    pass


class CascadeDegenerateError(FractalEntropyError):
    """Cascade constants reached 1 and the selector has no content"""
    pass


class NonIsometryError(FractalEntropyError):
    """A similitude with non-zero log-contraction where an isometry is required"""
    pass


class DomainError(FractalEntropyError):
    """A parameter lies outside the family domain"""
    pass


class FileHandler:
    """Utilities for file handling"""

    @staticmethod
    def ensure_directory(path: str) -> bool:
        """Ensures that a directory exists"""
        if not path:
            return True
        try:
            os.makedirs(path, exist_ok=True)
            return True
        except Exception as e:
            logger.error(f"Error creating directory {path}: {e}")
            return False

    @staticmethod
    def read_json_file(file_path: str) -> Optional[Dict[str, Any]]:
        """Reads a JSON file"""
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                return json.load(f)
        except Exception as e:
            logger.error(f"Error reading JSON file {file_path}: {e}")
            return None

    @staticmethod
    def load_json(file_path: str, what: str) -> Dict[str, Any]:
        """
        Reads a JSON object or raises ValidationError

        Args:
            file_path: Path of the file
            what: Human readable name used in the error message

        Returns:
            Parsed JSON object
        """
        data = FileHandler.read_json_file(file_path)
        if not isinstance(data, dict):
            raise ValidationError(f"Could not read {what} from {file_path}")
        return data

    @staticmethod
    def dumps(data: Any) -> str:
        """Deterministic JSON text (sorted keys, fixed separators)"""
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)
