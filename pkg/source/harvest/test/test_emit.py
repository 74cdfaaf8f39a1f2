# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import json

import pytest

from harvest.correlations import CSV_FIELDS, CorrelationReport
from harvest.emit import (
    EmitError,
    emit,
    emit_table,
    format_number,
    load_reports,
    rounded,
)

HEADER = ",".join(CSV_FIELDS)


def make(row, nu_tilde_minus=1.0):
    return CorrelationReport(*row, nu_tilde_minus, 1.0, 1.0, 0.0, 1.0)


START = make((0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0))
LATER = make(
    (2.0, 4.0, 1.0, 0.0, 0.1234567890123456, 0.05, 1.0001, 1.02, 1.01, 1.0), 0.99
)


def test_format_number():
    assert format_number(0.0) == "0"
    assert format_number(-0.0) == "0"
    assert format_number(4.0) == "4"
    assert format_number(0.1234567890123456) == "0.123456789012"
    assert format_number(0.1234567890123456, 3) == "0.123"
    assert format_number(1e-20) == "1e-20"
    assert rounded(0.1234567890123456, 4) == 0.1235


def test_header_only_csv(capsys):
    text = emit([])
    assert text == HEADER + "\n"
    assert capsys.readouterr().out == text


def test_csv_rows():
    text = emit([START, LATER], precision=6)
    lines = text.splitlines()
    assert lines[0] == HEADER
    assert lines[1] == "0,4,0,0,0,0,1,1,1,1"
    assert lines[2] == "2,4,1,0,0.123457,0.05,1.0001,1.02,1.01,1"
    assert text.endswith("\n")
    assert "\r" not in text


def test_json_round_trip(tmp_path):
    path = tmp_path / "reports.json"
    text = emit([START, LATER], "json", path, precision=5)
    assert path.read_text() == text
    records = load_reports(path)
    assert len(records) == 2
    assert records[0] == dict(zip(CSV_FIELDS, START.as_row()))
    assert records[1]["I"] == 0.12346
    assert list(json.loads(text)[1]) == list(CSV_FIELDS)


def test_emit_table_with_custom_header(tmp_path):
    path = tmp_path / "table.csv"
    emit_table(("r", "C"), [(1.0, float("nan")), (2.0, -0.5)], "csv", path)
    assert path.read_text() == "r,C\n1,nan\n2,-0.5\n"
    with pytest.raises(EmitError, match="xml"):
        emit_table(("r",), [], "xml")  # type: ignore[arg-type]


def test_write_failure_names_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(EmitError, match="out.csv"):
        emit([START], path=target)


@pytest.mark.parametrize(
    "content",
    ["{broken", json.dumps({"t": 0}), json.dumps([{"t": 0.0}])],
    ids=["not-json", "not-a-list", "missing-keys"],
)
def test_load_reports_rejects_bad_files(tmp_path, content):
    path = tmp_path / "reports.json"
    path.write_text(content)
    with pytest.raises(EmitError, match="reports.json"):
        load_reports(path)


def test_load_reports_missing_file(tmp_path):
    with pytest.raises(EmitError, match="absent.json"):
        load_reports(tmp_path / "absent.json")
