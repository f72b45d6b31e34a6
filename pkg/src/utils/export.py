"""CSV/JSON writers with full double precision and no timestamps."""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def format_float(value: float) -> str:
    return FLOAT_FORMAT % value


def _prepare(path) -> Path:
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    return output_path


def write_numeric_csv(path, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    output_path = _prepare(path)
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    np.savetxt(output_path, data, fmt=FLOAT_FORMAT, delimiter=',',
               header=','.join(header), comments='')
    logger.info(f"Wrote {len(data)} rows to {output_path}")
    return output_path


def write_rows_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Mixed-type rows; floats get 17 significant digits, everything else str()."""
    output_path = _prepare(path)
    count = 0
    with open(output_path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
            count += 1
    logger.info(f"Wrote {count} rows to {output_path}")
    return output_path


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def write_json(path, payload: Any) -> Path:
    output_path = _prepare(path)
    with open(output_path, 'w', encoding='utf-8') as f:
        json.dump(_jsonable(payload), f, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"Exported results to {output_path}")
    return output_path


def dumps_json(payload: Any) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True)


def polynomial_rows(coefficient_sets: List[Sequence[float]]) -> List[List[Any]]:
    """Pad coefficient lists to a common width for `degree,c0,...,cN` tables."""
    width = max((len(c) for c in coefficient_sets), default=0)
    rows = []
    for coefficients in coefficient_sets:
        padded = [float(c) for c in coefficients] + [0.0] * (width - len(coefficients))
        rows.append([len(coefficients) - 1] + padded)
    return rows
