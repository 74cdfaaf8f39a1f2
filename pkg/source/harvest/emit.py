# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence, Union

from harvest.correlations import CSV_FIELDS, CorrelationReport
from harvest.sweep_config import DEFAULT_PRECISION, OutputFormat

Table = Sequence[Sequence[float]]


class EmitError(RuntimeError):
    pass


def format_number(value: float, precision: int = DEFAULT_PRECISION) -> str:
    # str.format is locale-independent; "+ 0.0" drops a negative zero
    return format(float(value) + 0.0, f".{precision}g")


def rounded(value: float, precision: int = DEFAULT_PRECISION) -> float:
    return float(format_number(value, precision))


def render_csv(
    header: Sequence[str], rows: Table, precision: int = DEFAULT_PRECISION
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v, precision) for v in row])
    return buffer.getvalue()


def render_json(
    header: Sequence[str], rows: Table, precision: int = DEFAULT_PRECISION
) -> str:
    records = [
        {key: rounded(value, precision) for key, value in zip(header, row)}
        for row in rows
    ]
    return json.dumps(records, indent=1) + "\n"


def write_text(text: str, path: Optional[Union[str, Path]]) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(text, encoding="utf-8", newline="")
    except OSError as e:
        raise EmitError(f"Could not write output to {path}: {str(e)}") from e


def emit_table(
    header: Sequence[str],
    rows: Table,
    fmt: OutputFormat = "csv",
    path: Optional[Union[str, Path]] = None,
    precision: int = DEFAULT_PRECISION,
) -> str:
    if fmt == "csv":
        text = render_csv(header, rows, precision)
    elif fmt == "json":
        text = render_json(header, rows, precision)
    else:
        raise EmitError(f"unknown output format {fmt!r}")
    write_text(text, path)
    return text


def emit(
    reports: Sequence[CorrelationReport],
    fmt: OutputFormat = "csv",
    path: Optional[Union[str, Path]] = None,
    precision: int = DEFAULT_PRECISION,
) -> str:
    """Writes the reports to ``path`` (stdout when None) and returns the text."""
    rows = [report.as_row() for report in reports]
    return emit_table(CSV_FIELDS, rows, fmt, path, precision)


def load_reports(path: Union[str, Path]) -> list[dict[str, float]]:
    """Reads back a JSON emission as flat records."""
    try:
        records = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise EmitError(f"Could not read reports from {path}: {str(e)}") from e
    except json.JSONDecodeError as e:
        raise EmitError(f"{path} is not a JSON report file: {str(e)}") from e

    if not isinstance(records, list):
        raise EmitError(f"{path} does not hold a list of records")
    loaded: list[dict[str, float]] = []
    for record in records:
        if not isinstance(record, dict) or set(record) != set(CSV_FIELDS):
            raise EmitError(
                f"{path} holds a record without the expected keys: {record!r}"
            )
        loaded.append({key: float(record[key]) for key in CSV_FIELDS})
    return loaded
