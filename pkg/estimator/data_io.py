"""
Series ingestion and deterministic CSV/JSON output.
"""
import json
import os
from typing import Dict, Iterable, List, Optional, Sequence, Union
import numpy as np
import pandas as pd
from config import FLOAT_FORMAT
from .errors import DataFileNotFound, EmitError, NonFiniteValue, ParseError
from .series import TimeSeries

ColumnSelector = Union[int, str]


def _to_float(cell: str) -> Optional[float]:
    try:
        return float(cell)
    except (TypeError, ValueError):
        return None


def _cell(frame: pd.DataFrame, row: int, index: int) -> str:
    cell = frame.iat[row, index]
    return cell.strip() if isinstance(cell, str) else ""


def read_csv(path: str, column: ColumnSelector = 0) -> TimeSeries:
    """
    Read one numeric column of a comma-separated UTF-8 file into a TimeSeries.

    The first row is treated as a header when its cell in the selected column is
    not numeric (always the case when the column is selected by name).

    params:
        path - The file to read
        column - Column index or header name

    returns:
        The series in file order

    raises:
        DataFileNotFound - If the file does not exist
        ParseError - If a cell is empty or not numeric (row is the 0-based file row)
        NonFiniteValue - If a cell parses to NaN or infinity
    """
    if not os.path.isfile(path):
        raise DataFileNotFound(f"no such file: {path}")

    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False,
                            skip_blank_lines=True, encoding='utf-8')
    except pd.errors.EmptyDataError:
        return TimeSeries(np.empty(0), name=str(column))
    except (pd.errors.ParserError, UnicodeDecodeError) as ex:
        raise ParseError(row=-1, column=column, value=str(ex))

    # Resolve the column and detect the header
    start = 0
    if isinstance(column, str) and not column.lstrip('-').isdigit():
        header = [_cell(frame, 0, i) for i in range(frame.shape[1])] if len(frame) else []
        if column not in header:
            raise ParseError(row=0, column=column, value=None)
        index = header.index(column)
        start = 1
    else:
        index = int(column)
        if index < 0 or index >= frame.shape[1]:
            raise ParseError(row=0, column=column, value=None)
        if len(frame) and _to_float(_cell(frame, 0, index)) is None:
            start = 1

    values: List[float] = []
    for row in range(start, len(frame)):
        cell = _cell(frame, row, index)
        value = _to_float(cell) if cell else None
        if value is None:
            raise ParseError(row=row, column=column, value=cell)
        if not np.isfinite(value):
            raise NonFiniteValue(row)
        values.append(value)

    return TimeSeries(np.array(values, dtype=float), name=str(column))


def to_csv_text(rows: Iterable[Sequence], columns: Sequence[str]) -> str:
    """Render rows as CSV with a fixed column order and 17 significant digits."""
    frame = pd.DataFrame(list(rows), columns=list(columns))
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def to_json_text(payload: Dict) -> str:
    """One-line JSON with sorted keys; numpy scalars converted."""
    return json.dumps(payload, sort_keys=True, default=_json_default)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def emit_plot_data(rows: Iterable[Sequence], path: str, metadata: Dict,
                   columns: Sequence[str] = ("z", "Fhat")) -> str:
    """
    Write rows as CSV to path and the metadata as a one-line JSON sidecar at path + '.json'.
    Identical inputs give identical bytes.

    returns:
        The sidecar path

    raises:
        EmitError - If either file cannot be written
    """
    sidecar = f"{path}.json"
    try:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(to_csv_text(rows, columns))
        with open(sidecar, 'w', encoding='utf-8', newline='') as handle:
            handle.write(to_json_text(metadata) + '\n')
    except OSError as ex:
        raise EmitError(f"cannot write plot data to {path}: {ex}")
    return sidecar
