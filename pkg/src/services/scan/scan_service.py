"""
Service for parameter sweeps over a family
"""
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from src.config.settings import settings
from src.models.family import ParamFamily, ScanRow
from src.models.ifs import IFSSystem
from src.services.ifs import IFSService
from src.services.satcon import ordered_map
from src.utils.helpers import FractalEntropyError, ValidationError
from .family_service import FamilyService
from .interfaces import ScanInterface

logger = logging.getLogger(__name__)

# Output columns per diagnostic
DIAGNOSTIC_COLUMNS: Dict[str, List[str]] = {
    "sdim": ["sdim"],
    "sdim_measure": ["sdim_measure"],
    "dim_estimate": ["dim_estimate"],
    "delta_n": ["delta_n", "log2_delta_over_n"],
    "entropy_diagnostics": ["A", "B", "C", "bridge_holds"],
}

REQUIRED_ARGS: Dict[str, List[str]] = {
    "sdim": [],
    "sdim_measure": [],
    "dim_estimate": ["n"],
    "delta_n": ["n"],
    "entropy_diagnostics": ["n", "q"],
}


def grid_points(family: ParamFamily, counts: Sequence[int]) -> List[List[float]]:
    """Points of the product grid with counts[k] evenly spaced values per axis, endpoints included"""
    if len(counts) != family.m or any(int(c) < 1 for c in counts):
        raise ValidationError(f"one positive count per parameter axis is required ({family.m} axes)")
    axes = [np.linspace(lo, hi, int(c)) if int(c) > 1 else np.array([(lo + hi) / 2.0])
            for lo, hi, c in zip(family.lower, family.upper, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1).tolist()


class ScanService(ScanInterface):
    """Evaluates requested diagnostics at each grid point, row order fixed by grid index"""

    def __init__(self, family_service: FamilyService, ifs_service: IFSService):
        self.family_service = family_service
        self.ifs_service = ifs_service
        self._handlers: Dict[str, Callable[[IFSSystem, Dict[str, Any]], Dict[str, Optional[float]]]] = {
            "sdim": lambda ifs, _: {"sdim": self.ifs_service.sdim(ifs, "set")},
            "sdim_measure": lambda ifs, _: {"sdim_measure": self.ifs_service.sdim(ifs, "measure")},
            "dim_estimate": self._dim_estimate,
            "delta_n": self._delta_n,
            "entropy_diagnostics": self._entropy_diagnostics,
        }

    @staticmethod
    def check_diagnostics(diagnostics: List[Dict[str, Any]]) -> List[str]:
        """Problems with a diagnostic list; empty when it is usable"""
        problems = []
        seen = set()
        for item in diagnostics:
            name = item.get("name")
            if name not in DIAGNOSTIC_COLUMNS:
                problems.append(f"unknown diagnostic '{name}'")
                continue
            if name in seen:
                problems.append(f"diagnostic '{name}' requested twice")
            seen.add(name)
            missing = [arg for arg in REQUIRED_ARGS[name] if arg not in item]
            if missing:
                problems.append(f"diagnostic '{name}' needs {', '.join(missing)}")
            if name == "entropy_diagnostics" and "q" in item and float(item["q"]) <= 1:
                problems.append("q must exceed 1")
        return problems

    @staticmethod
    def columns(diagnostics: List[Dict[str, Any]]) -> List[str]:
        return [column for item in diagnostics for column in DIAGNOSTIC_COLUMNS[item["name"]]]

    def _dim_estimate(self, ifs: IFSSystem, args: Dict[str, Any]) -> Dict[str, Optional[float]]:
        L = args.get("L")
        return {"dim_estimate": self.ifs_service.dim_estimate(ifs, int(args["n"]), int(L) if L is not None else None)}

    def _delta_n(self, ifs: IFSSystem, args: Dict[str, Any]) -> Dict[str, Optional[float]]:
        row = self.ifs_service.delta_n(ifs, int(args["n"])).to_row()
        return {"delta_n": row["delta"], "log2_delta_over_n": row["log2_delta_over_n"]}

    def _entropy_diagnostics(self, ifs: IFSSystem, args: Dict[str, Any]) -> Dict[str, Optional[float]]:
        result = self.ifs_service.entropy_diagnostics(ifs, int(args["n"]), float(args["q"]))
        return {"A": result.A, "B": result.B, "C": result.C, "bridge_holds": float(result.bridge_holds)}

    def _row(self, family: ParamFamily, index: int, point: List[float],
             diagnostics: List[Dict[str, Any]]) -> ScanRow:
        values: Dict[str, Optional[float]] = {}
        try:
            ifs = self.family_service.build(family, point)
            for item in diagnostics:
                values.update(self._handlers[item["name"]](ifs, item))
        except (FractalEntropyError, ValidationError, ValueError) as e:
            logger.warning(f"Scan point {index} {point} failed: {e}")
            return ScanRow(index=index, params=point, values=values, error=f"{type(e).__name__}: {e}")
        return ScanRow(index=index, params=point, values=values)

    def scan(self, family: ParamFamily, points: Sequence[Sequence[float]],
             diagnostics: List[Dict[str, Any]], threads: Optional[int] = None) -> List[ScanRow]:
        """
        Sweeps the diagnostics over the grid

        Args:
            family: The family
            points: Grid points, each of length family.m
            diagnostics: Items such as {"name": "delta_n", "n": 8}
            threads: Worker count (settings.THREADS by default)

        Returns:
            One ScanRow per point, in grid order; failures land in the error column

        Raises:
            ValidationError: Unknown or incomplete diagnostics
            BudgetExceededError: A composition depth exceeds the budget
        """
        problems = self.check_diagnostics(diagnostics)
        if problems:
            raise ValidationError("; ".join(problems))
        points = [[float(x) for x in point] for point in points]
        if any(len(point) != family.m for point in points):
            raise ValidationError(f"every grid point needs {family.m} coordinate(s)")

        # the alphabet does not depend on t, so one budget check covers the grid
        if points:
            first_system = self.family_service.build(family, family.lower)
            depths = [int(item["n"]) for item in diagnostics if "n" in item]
            for n in depths:
                self.ifs_service.composition_service.check_budget(first_system, n)

        logger.info(f"Scanning {family.family_id} at {len(points)} points with {len(diagnostics)} diagnostic(s)")
        rows = ordered_map(
            lambda k: self._row(family, k, points[k], diagnostics),
            range(len(points)),
            threads or settings.THREADS,
        )
        failed = sum(1 for row in rows if row.error)
        if failed:
            logger.warning(f"{failed} of {len(rows)} scan points recorded errors")
        return rows
