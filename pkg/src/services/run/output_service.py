"""
Output writer for result tables
CSV or JSON results with a JSON manifest sidecar, written through a temporary file
"""
import csv
import io
import json
import logging
import math
import shutil
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from src.models.run_config import OutputFormat
from src.utils.helpers import FileHandler
from .interfaces import OutputInterface

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """numpy scalars and arrays as plain Python values, non-finite floats as strings"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def _cell(value: Any) -> str:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    return str(value)


class OutputService(OutputInterface):
    """Deterministic table writer; the same rows always give the same bytes"""

    @staticmethod
    def render_csv(rows: List[Dict[str, Any]]) -> str:
        columns: List[str] = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(column)) for column in columns])
        return buffer.getvalue()

    @staticmethod
    def render_json(data: Any) -> str:
        return FileHandler.dumps(_plain(data)) + "\n"

    @staticmethod
    def _atomic_write(path: Path, text: str) -> None:
        """Writes a temporary file first and moves it into place"""
        FileHandler.ensure_directory(str(path.parent))
        temp_path = path.with_name(path.name + ".tmp")
        with open(temp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        shutil.move(str(temp_path), str(path))

    def write(self, rows: List[Dict[str, Any]], payload: Any, path: Optional[str], fmt: OutputFormat,
              manifest: Dict[str, Any]) -> None:
        """
        Writes a result

        Args:
            rows: Table rows (CSV output)
            payload: Structured result (JSON output); rows are used when None
            path: Output file, stdout when None
            fmt: csv or json
            manifest: Configuration echo, written to <path>.manifest.json
        """
        if fmt == OutputFormat.JSON:
            text = self.render_json(rows if payload is None else payload)
        else:
            text = self.render_csv(rows)

        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            logger.debug("Result written to stdout; manifest not written")
            return

        target = Path(path)
        try:
            self._atomic_write(target, text)
            self._atomic_write(target.with_name(target.name + ".manifest.json"), self.render_json(manifest))
        except OSError as e:
            logger.error(f"Error writing {target}: {e}")
            raise
        logger.info(f"Wrote {len(rows)} row(s) to {target}")

    @staticmethod
    def read_manifest(path: str) -> Optional[Dict[str, Any]]:
        """Manifest written next to an output file, if any"""
        manifest_path = Path(path + ".manifest.json")
        if not manifest_path.exists():
            return None
        with open(manifest_path, "r", encoding="utf-8") as f:
            return json.load(f)
