"""
Interfaces for batch run services
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from src.models.run_config import OutputFormat, RunConfig


class ValidationInterface(ABC):
    """Interface for run configuration checks"""

    @abstractmethod
    def validate(self, config: RunConfig) -> List[str]:
        """Problems with the configuration; empty when it can run"""
        pass


class OutputInterface(ABC):
    """Interface for table and manifest writers"""

    @abstractmethod
    def write(self, rows: List[Dict[str, Any]], payload: Any, path: Optional[str], fmt: OutputFormat,
              manifest: Dict[str, Any]) -> None:
        """Writes the result and its manifest"""
        pass


class RunInterface(ABC):
    """Interface for executing a run"""

    @abstractmethod
    def run(self, config: RunConfig) -> int:
        """Executes the command and returns the process exit status"""
        pass
