"""
Application configuration
Numeric budgets, calibrated constants and runtime options read from the environment
"""
import os
import logging
from dotenv import load_dotenv
from typing import Optional

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


def _optional_float(name: str) -> Optional[float]:
    value = os.getenv(name, "")
    return float(value) if value.strip() else None


class Settings:
    """Application configuration"""

    # Budgets
    BUDGET: int = int(os.getenv("FEL_BUDGET", str(2 ** 24)))
    THREADS: int = int(os.getenv("FEL_THREADS", "1"))
    CHUNK_SIZE: int = int(os.getenv("FEL_CHUNK_SIZE", str(2 ** 21)))

    # Calibrated constants (None means "4 * d")
    KV_CONSTANT: Optional[float] = _optional_float("FEL_KV_CONSTANT")
    LOCAL_GLOBAL_CONSTANT: Optional[float] = _optional_float("FEL_LOCAL_GLOBAL_CONSTANT")
    BRIDGE_CONSTANT: float = float(os.getenv("FEL_BRIDGE_CONSTANT", "8.0"))
    ISOMETRY_DIM_CONSTANT: float = float(os.getenv("FEL_ISOMETRY_DIM_CONSTANT", "0.5"))
    SATURATION_CONSTANT: float = float(os.getenv("FEL_SATURATION_CONSTANT", "0.25"))

    # Subspace machinery
    MAX_SUBSPACE_DIM: int = int(os.getenv("FEL_MAX_SUBSPACE_DIM", "3"))
    NON_AFFINE_ATOMS: int = int(os.getenv("FEL_NON_AFFINE_ATOMS", "64"))

    # Finite differences and exact arithmetic
    FD_STEP: float = float(os.getenv("FEL_FD_STEP", "1e-5"))
    FD_TOL: float = float(os.getenv("FEL_FD_TOL", "1e-6"))
    EXACT_TOL: float = float(os.getenv("FEL_EXACT_TOL", "1e-12"))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()
    LOG_TO_FILE: bool = os.getenv("LOG_TO_FILE", "false").lower() == "true"

    @classmethod
    def kv_constant(cls, d: int) -> float:
        """C_kv of the iterated convolution bound, defaulting to 4d"""
        return cls.KV_CONSTANT if cls.KV_CONSTANT is not None else 4.0 * d

    @classmethod
    def local_global_constant(cls, d: int) -> float:
        """C of the local-to-global entropy bound, defaulting to 4d"""
        return cls.LOCAL_GLOBAL_CONSTANT if cls.LOCAL_GLOBAL_CONSTANT is not None else 4.0 * d

    @classmethod
    def validate(cls) -> bool:
        """Validates the numeric configuration"""
        problems = []
        for name in ("BUDGET", "THREADS", "CHUNK_SIZE", "NON_AFFINE_ATOMS"):
            if getattr(cls, name) <= 0:
                problems.append(f"{name} must be positive")
        if not 1 <= cls.MAX_SUBSPACE_DIM <= 6:
            problems.append("MAX_SUBSPACE_DIM must be between 1 and 6")
        elif cls.MAX_SUBSPACE_DIM > 3:
            logger.warning(
                f"MAX_SUBSPACE_DIM={cls.MAX_SUBSPACE_DIM}: translate searches are heuristic above d=3"
            )
        if cls.FD_STEP <= 0 or cls.FD_TOL <= 0 or cls.EXACT_TOL <= 0:
            problems.append("FD_STEP, FD_TOL and EXACT_TOL must be positive")
        if cls.SATURATION_CONSTANT <= 0:
            problems.append("SATURATION_CONSTANT must be positive")

        if problems:
            raise ValueError(f"Invalid configuration: {'; '.join(problems)}")

        return True


# Global configuration instance
settings = Settings()
