"""
Service for run configuration checks
"""
import logging
import re
from typing import Any, Dict, List, Tuple

from src.models.run_config import Command, RunConfig
from .interfaces import ValidationInterface

logger = logging.getLogger(__name__)

DEPTH_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")

# (number of inputs, required parameters) per command
REQUIREMENTS: Dict[Command, Tuple[int, List[str]]] = {
    Command.ANALYZE_IFS: (1, []),
    Command.DELTA: (1, ["n"]),
    Command.OVERLAPS: (1, ["n_max"]),
    Command.DIM_ESTIMATE: (1, ["n"]),
    Command.DIAGNOSTICS: (1, ["n", "q"]),
    Command.ENTROPY: (1, ["n"]),
    Command.CONV_ENTROPY: (2, ["n"]),
    Command.KV_CHECK: (2, ["k", "n"]),
    Command.INVERSE_VERDICT: (2, ["n", "eps", "m"]),
    Command.ISOMETRY_VERDICT: (2, ["k", "n", "eps", "m"]),
    Command.SLICE: (1, ["n", "p"]),
    Command.SCAN: (0, ["family", "diagnostics"]),
    Command.COVER: (0, ["family", "n", "eps", "grid_step"]),
}


def parse_depths(value: Any) -> List[int]:
    """A depth given as an integer, a list of integers or an inclusive range "a..b" """
    if isinstance(value, bool):
        raise ValueError(f"invalid depth {value!r}")
    if isinstance(value, int):
        return [value]
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    text = str(value)
    match = DEPTH_RANGE.match(text)
    if match:
        low, high = int(match.group(1)), int(match.group(2))
        if low > high:
            raise ValueError(f"empty depth range {text}")
        return list(range(low, high + 1))
    return [int(text)]


class ValidationService(ValidationInterface):
    """Schema and cross-field checks of a RunConfig"""

    def validate(self, config: RunConfig) -> List[str]:
        """
        Checks a configuration

        Args:
            config: The run configuration

        Returns:
            List of problems, empty when the configuration is valid
        """
        if not config.command:
            return ["missing command"]
        try:
            command = Command(config.command)
        except ValueError:
            known = ", ".join(c.value for c in Command)
            return [f"unknown command '{config.command}'; known: {known}"]

        errors: List[str] = []
        if config.budget <= 0:
            errors.append("budget must be positive")
        if config.threads <= 0:
            errors.append("threads must be positive")

        inputs, required = REQUIREMENTS[command]
        if len(config.inputs) != inputs:
            errors.append(f"{command.value} takes {inputs} input(s), got {len(config.inputs)}")
        params = config.parameters
        missing = [name for name in required if params.get(name) is None]
        errors.extend(f"missing parameter '{name}'" for name in missing)
        try:
            errors.extend(self._check_values(command, params))
        except (TypeError, ValueError) as e:
            errors.append(f"invalid numeric parameter: {e}")
        if errors:
            logger.debug(f"Configuration problems: {errors}")
        return errors

    @staticmethod
    def _check_values(command: Command, params: Dict[str, Any]) -> List[str]:
        errors: List[str] = []
        try:
            depths = parse_depths(params["n"]) if params.get("n") is not None else []
        except ValueError as e:
            return [f"invalid n: {e}"]
        if any(n < 0 for n in depths):
            errors.append("n must be non-negative")
        if command == Command.ENTROPY and params.get("m") is not None and int(params["m"]) < 0:
            errors.append("m must be non-negative")
        if command == Command.DIAGNOSTICS and params.get("q") is not None and float(params["q"]) <= 1:
            errors.append("q must exceed 1")
        if params.get("eps") is not None and not 0.0 < float(params["eps"]) < 1.0:
            errors.append("eps must lie in (0, 1)")
        if params.get("sigma") is not None and float(params["sigma"]) <= 0:
            errors.append("sigma must be positive")
        for name in ("k", "p", "n_max"):
            if params.get(name) is not None and int(params[name]) < 1:
                errors.append(f"{name} must be positive")
        if params.get("grid_step") is not None and float(params["grid_step"]) <= 0:
            errors.append("grid_step must be positive")

        m, L = params.get("m"), params.get("L")
        # the entropy table leaves H_cond empty below m instead
        if m is not None and depths and command != Command.ENTROPY and int(m) > min(depths):
            errors.append("m must not exceed n")
        if L is not None and depths and max(depths) > int(L):
            errors.append("n must not exceed L")
        if command == Command.SCAN and params.get("points") is None and params.get("counts") is None:
            errors.append("scan needs 'points' or 'counts'")
        return errors
