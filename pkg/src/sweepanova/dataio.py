"""Reading designs from CSV (one row per unit) or from a JSON design echo."""

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .design import BlockDesign
from .exceptions import EmptyFileError, MissingColumnError, NonNumericResponseError
from .model import Factor, UnitTable
from .spectral import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class AnalysisConfig:
    design_path: str
    response_column: str = "y"
    block_column: str = "block"
    treatment_column: str = "treatment"
    extra_factor_columns: tuple = ()
    tol: Tolerance = field(default=DEFAULT_TOL)
    output_format: str = "text"


def _read_rows(path):
    path = Path(path)
    if path.suffix.lower() == ".json":
        with path.open() as fh:
            doc = json.load(fh)
        design = doc.get("design", doc)
        rows = design.get("units", [])
        columns = list(design.get("columns", rows[0].keys() if rows else []))
        return columns, [{k: (v if isinstance(v, str) else repr(v)) for k, v in r.items()} for r in rows]
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [{k.strip(): (v or "").strip() for k, v in row.items() if k is not None} for row in reader]
        columns = [c.strip() for c in (reader.fieldnames or [])]
    return columns, rows


def ingest(path, config):
    """Parse a design file into a :class:`UnitTable` and (if possible) a :class:`BlockDesign`.

    Block and treatment columns are optional for the unit table; the
    :class:`BlockDesign` is ``None`` when either is absent. The response column
    is likewise optional and parsed as finite floats when present.
    """
    columns, rows = _read_rows(path)
    if not columns or not rows:
        raise EmptyFileError(f"{path}: no header or no data rows")
    wanted = [config.block_column, config.treatment_column, *config.extra_factor_columns]
    for col in config.extra_factor_columns:
        if col not in columns:
            raise MissingColumnError(f"{path}: missing column {col!r}")

    factors = []
    for col in wanted:
        if col in columns:
            factors.append(Factor.from_values(col, [row[col] for row in rows]))

    response = None
    if config.response_column in columns:
        values = []
        for lineno, row in enumerate(rows, start=2):
            raw = row[config.response_column]
            try:
                value = float(raw)
            except ValueError:
                raise NonNumericResponseError(f"{path}, row {lineno}: response {raw!r} is not a number") from None
            if not math.isfinite(value):
                raise NonNumericResponseError(f"{path}, row {lineno}: response {raw!r} is not finite")
            values.append(value)
        response = np.array(values)

    table = UnitTable(len(rows), tuple(factors), response)
    design = None
    if config.block_column in columns and config.treatment_column in columns:
        design = BlockDesign.from_labels(
            [row[config.block_column] for row in rows],
            [row[config.treatment_column] for row in rows],
        )
    return table, design


def require_design(design, config):
    if design is None:
        missing = [c for c in (config.block_column, config.treatment_column)]
        raise MissingColumnError(f"block and treatment columns required: {missing}")
    return design
