"""
Batch run service
Dispatches a validated RunConfig to the analysis services and writes the result
"""
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from src import __version__
from src.models.ifs import IFSSystem
from src.models.measure import LatticeMeasure, SimMeasure
from src.models.run_config import Command, RunConfig
from src.models.subspace import Subspace
from src.services.ifs import IFSService
from src.services.measure import MeasureService
from src.services.satcon import KVService, MeasureSubspaceService, PredicateService, VerdictService
from src.services.scan import ParamScanService
from src.services.subspace import SubspaceGeometryService, SubspaceSelectorService
from src.utils.helpers import BudgetExceededError, FileHandler, FractalEntropyError, ValidationError
from .interfaces import RunInterface
from .output_service import OutputService
from .validation_service import ValidationService, parse_depths

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3

# rows, structured payload for JSON output (rows when None), extra manifest entries
Result = Tuple[List[Dict[str, Any]], Any, Dict[str, Any]]


def guarded(base: Dict[str, Any], compute: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    """One table row; numeric failures land in its error column"""
    row = dict(base)
    try:
        row.update(compute())
        row["error"] = ""
    except BudgetExceededError:
        raise
    except FractalEntropyError as e:
        logger.warning(f"Row {base} failed: {e}")
        row["error"] = f"{type(e).__name__}: {e}"
    return row


class RunService(RunInterface):
    """Executes one batch command"""

    def __init__(self, output_service: Optional[OutputService] = None,
                 validation_service: Optional[ValidationService] = None):
        self.output_service = output_service or OutputService()
        self.validation_service = validation_service or ValidationService()
        self.measure_service = MeasureService()
        self.ifs_service = IFSService(self.measure_service)
        self.scan_service = ParamScanService(self.ifs_service)

        geometry = SubspaceGeometryService()
        self.predicates = PredicateService(self.measure_service.lattice_service, geometry)
        self.measure_subspaces = MeasureSubspaceService(self.predicates, geometry, self.measure_service.moment_service)
        self.kv_service = KVService(self.measure_service.lattice_service, self.measure_service.convolution_service)
        self.verdict_service = VerdictService(self.measure_service, self.predicates, self.measure_subspaces,
                                              SubspaceSelectorService(geometry))

        self._handlers: Dict[Command, Callable[[RunConfig], Result]] = {
            Command.ANALYZE_IFS: self._analyze_ifs,
            Command.DELTA: self._delta,
            Command.OVERLAPS: self._overlaps,
            Command.DIM_ESTIMATE: self._dim_estimate,
            Command.DIAGNOSTICS: self._diagnostics,
            Command.ENTROPY: self._entropy,
            Command.CONV_ENTROPY: self._conv_entropy,
            Command.KV_CHECK: self._kv_check,
            Command.INVERSE_VERDICT: self._inverse_verdict,
            Command.ISOMETRY_VERDICT: self._isometry_verdict,
            Command.SLICE: self._slice,
            Command.SCAN: self._scan,
            Command.COVER: self._cover,
        }

    def run(self, config: RunConfig) -> int:
        """
        Executes a run

        Args:
            config: The run configuration

        Returns:
            0 on success (per-row failures included), 2 on invalid input,
            3 when the budget is exceeded
        """
        errors = self.validation_service.validate(config)
        if errors:
            for error in errors:
                logger.error(f"❌ {error}")
            return EXIT_INVALID

        command = Command(config.command)
        self.ifs_service.composition_service.budget = config.budget
        logger.info(f"🚀 Running {command.value} on {config.inputs or 'a parameter family'}")
        try:
            rows, payload, extra = self._handlers[command](config)
        except BudgetExceededError as e:
            logger.error(f"❌ Budget exceeded: {e}")
            return EXIT_BUDGET
        except (ValidationError, PydanticValidationError) as e:
            logger.error(f"❌ Invalid input: {e}")
            return EXIT_INVALID
        except FractalEntropyError as e:
            logger.warning(f"⚠️ {command.value} failed: {e}")
            rows, payload, extra = [{"error": f"{type(e).__name__}: {e}"}], None, {}

        manifest = config.manifest(__version__)
        manifest.update(extra)
        self.output_service.write(rows, payload, config.output, config.format, manifest)
        logger.info(f"✅ {command.value} finished with {len(rows)} row(s)")
        return EXIT_OK

    # Inputs
    @staticmethod
    def _load(path: str, what: str) -> Dict[str, Any]:
        return FileHandler.load_json(path, what)

    def _system(self, source: str) -> IFSSystem:
        return self.ifs_service.resolve_system(source, lambda path: self._load(path, "IFS definition"))

    def _lattice(self, path: str) -> LatticeMeasure:
        data = self._load(path, "lattice measure")
        try:
            return LatticeMeasure.from_json(data)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"invalid lattice measure in {path}: {e}")

    def _sim_measure(self, source: str, depth: int) -> SimMeasure:
        """nu^(depth) of a system, or a measure on G read from a file"""
        if not Path(source).is_file():
            return self.ifs_service.nu_n(self._system(source), depth)
        data = self._load(source, "measure on G")
        if "maps" in data:
            return self.ifs_service.nu_n(self.ifs_service.system_from_json(data), depth)
        try:
            return SimMeasure.from_json(data)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"invalid measure on G in {source}: {e}")

    # Systems
    def _analyze_ifs(self, config: RunConfig) -> Result:
        ifs = self._system(config.inputs[0])
        row = {
            "system": ifs.name,
            "d": ifs.d,
            "maps": ifs.size,
            "exact": ifs.is_exact,
            "sdim": self.ifs_service.sdim(ifs, "set"),
            "sdim_measure": self.ifs_service.sdim(ifs, "measure"),
            "mean_contraction": self.ifs_service.mean_contraction(ifs),
        }
        return [row], dict(row, system_definition=ifs.to_json()), {}

    def _delta(self, config: RunConfig) -> Result:
        ifs = self._system(config.inputs[0])
        rows = [
            guarded({"system": ifs.name}, lambda n=n: self.ifs_service.delta_n(ifs, n).to_row())
            for n in parse_depths(config.parameters["n"])
        ]
        return rows, None, {}

    def _overlaps(self, config: RunConfig) -> Result:
        ifs = self._system(config.inputs[0])
        result = self.ifs_service.exact_overlaps(ifs, int(config.parameters["n_max"]))
        if result is None:
            return [{"system": ifs.name, "n": None, "word_i": "", "word_j": "", "exact": None}], None, {}
        data = result.to_json()
        row = {
            "system": ifs.name,
            "n": data["n"],
            "word_i": data["words"][0],
            "word_j": data["words"][1],
            "exact": data["exact"],
        }
        return [row], data, {}

    def _dim_estimate(self, config: RunConfig) -> Result:
        ifs = self._system(config.inputs[0])
        L = config.parameters.get("L")

        def estimate(n: int) -> Dict[str, Any]:
            return {
                "n": n,
                "n_prime": self.ifs_service.n_prime(ifs, n),
                "dim_estimate": self.ifs_service.dim_estimate(ifs, n, int(L) if L is not None else None),
                "sdim": self.ifs_service.sdim(ifs, "measure"),
            }

        rows = [guarded({"system": ifs.name}, lambda n=n: estimate(n)) for n in parse_depths(config.parameters["n"])]
        return rows, None, {}

    def _diagnostics(self, config: RunConfig) -> Result:
        ifs = self._system(config.inputs[0])
        q = float(config.parameters["q"])

        def diagnose(n: int) -> Dict[str, Any]:
            result = self.ifs_service.entropy_diagnostics(ifs, n, q)
            row = result.model_dump()
            row["bridge_holds"] = result.bridge_holds
            return row

        rows = [guarded({"system": ifs.name}, lambda n=n: diagnose(n)) for n in parse_depths(config.parameters["n"])]
        return rows, None, {}

    # Measures
    def _entropy(self, config: RunConfig) -> Result:
        mu = self._lattice(config.inputs[0])
        params = config.parameters
        m = int(params["m"]) if params.get("m") is not None else None
        table = self.measure_service.entropy_table(mu, parse_depths(params["n"]), m)
        return [suite.model_dump(exclude={"m"}) for suite in table], None, {}

    def _conv_entropy(self, config: RunConfig) -> Result:
        mu, nu = (self._lattice(path) for path in config.inputs)
        rows = [
            guarded({}, lambda n=n: self.measure_service.conv_growth(mu, nu, n))
            for n in parse_depths(config.parameters["n"])
        ]
        return rows, None, {}

    def _kv_check(self, config: RunConfig) -> Result:
        mu, nu = (self._lattice(path) for path in config.inputs)
        k = int(config.parameters["k"])
        reports = []
        rows = []
        for n in parse_depths(config.parameters["n"]):
            report = self.kv_service.kv_check(mu, nu, k, n)
            reports.append(report.model_dump())
            rows.append(report.to_row())
        return rows, reports, {}

    def _inverse_verdict(self, config: RunConfig) -> Result:
        mu, nu = (self._lattice(path) for path in config.inputs)
        params = config.parameters
        verdict = self.verdict_service.inverse_verdict(
            mu, nu, parse_depths(params["n"])[0], float(params["eps"]), int(params["m"]), threads=config.threads
        )
        return [verdict.summary_row()], verdict.to_json(), {}

    def _isometry_verdict(self, config: RunConfig) -> Result:
        params = config.parameters
        nu = self._sim_measure(config.inputs[0], int(params.get("depth", 2)))
        mu = self._lattice(config.inputs[1])
        verdict = self.verdict_service.isometry_verdict(
            nu, mu, int(params["k"]), parse_depths(params["n"])[0], float(params["eps"]), int(params["m"]),
            threads=config.threads,
        )
        return [verdict.summary_row()], verdict.to_json(), {}

    def _slice(self, config: RunConfig) -> Result:
        ifs = self._system(config.inputs[0])
        params = config.parameters
        vectors = params.get("V") or [np.eye(ifs.d)[0].tolist()]
        V = Subspace.span(vectors, ifs.d)
        L = params.get("L")

        def slice_row(n: int) -> Dict[str, Any]:
            result = self.ifs_service.slice_entropy(ifs, V, n, int(params["p"]), int(L) if L is not None else None)
            return dict(result.model_dump(), n=n, V_dim=V.k)

        rows = [guarded({"system": ifs.name}, lambda n=n: slice_row(n)) for n in parse_depths(params["n"])]
        return rows, None, {}

    # Families
    def _family(self, params: Dict[str, Any]):
        return self.scan_service.make_family(
            str(params["family"]), params.get("lower"), params.get("upper"), params.get("constants")
        )

    def _scan(self, config: RunConfig) -> Result:
        params = config.parameters
        family = self._family(params)
        points = params.get("points")
        if points is None:
            points = self.scan_service.grid_points(family, params["counts"])
        diagnostics = list(params["diagnostics"])
        rows = self.scan_service.scan(family, points, diagnostics, threads=config.threads)
        columns = self.scan_service.scan_service.columns(diagnostics)
        extra = {"family": family.model_dump(), "grid_points": len(rows), "columns": columns}
        return [row.to_row(columns) for row in rows], None, extra

    def _cover(self, config: RunConfig) -> Result:
        params = config.parameters
        family = self._family(params)
        report = self.scan_service.exceptional_cover(
            family, parse_depths(params["n"])[0], float(params["eps"]), float(params["grid_step"]),
            threads=config.threads, budget=config.budget,
        )
        rows = [
            dict({f"i{k + 1}": index for k, index in enumerate(cell.index)},
                 **{f"t{k + 1}": value for k, value in enumerate(cell.center)},
                 min_distance=cell.min_distance, hit=cell.hit)
            for cell in report.cells
        ]
        payload = dict(report.summary_row(), cells=[cell.model_dump() for cell in report.cells])
        return rows, payload, {"family": family.model_dump(), "cover": report.summary_row()}
