"""
Data models for batch runs
"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.config.settings import settings


class Command(str, Enum):
    """Batch commands"""
    ANALYZE_IFS = "analyze-ifs"
    DELTA = "delta"
    OVERLAPS = "overlaps"
    DIM_ESTIMATE = "dim-estimate"
    DIAGNOSTICS = "diagnostics"
    ENTROPY = "entropy"
    CONV_ENTROPY = "conv-entropy"
    KV_CHECK = "kv-check"
    INVERSE_VERDICT = "inverse-verdict"
    ISOMETRY_VERDICT = "isometry-verdict"
    SLICE = "slice"
    SCAN = "scan"
    COVER = "cover"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """
    A batch run: one command over named systems or input files

    Cross-field requirements are checked by the validation service, which
    returns a list of problems instead of raising.
    """
    command: str = Field("", description="One of the Command values")
    inputs: List[str] = Field(default_factory=list, description="Files or named systems")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Numeric parameters (n, m, q, eps, ...)")
    output: Optional[str] = Field(None, description="Output path; stdout when absent")
    format: OutputFormat = Field(OutputFormat.CSV, description="csv or json")
    budget: int = Field(default_factory=lambda: settings.BUDGET, description="Maximum compositions")
    threads: int = Field(default_factory=lambda: settings.THREADS, description="Worker count")

    def manifest(self, version: str) -> Dict[str, Any]:
        """Full configuration echo written next to every output"""
        return {
            "library_version": version,
            "command": self.command,
            "inputs": list(self.inputs),
            "parameters": {k: self.parameters[k] for k in sorted(self.parameters)},
            "format": self.format.value,
            "budget": self.budget,
        }
