from __future__ import annotations

import json

import pytest

from stateforms.report import FAIL, PASS, SKIPPED, CheckRecord, SuiteReport


def make(records):
    return SuiteReport("demo", 2, {"seed": 0}, records)


def test_exit_codes():
    assert make([CheckRecord("a", "x", PASS)]).exit_code() == 0
    assert make([CheckRecord("a", "x", FAIL)]).exit_code() == 1
    assert make([CheckRecord("a", "x", FAIL, expected=FAIL)]).exit_code() == 1
    assert make([CheckRecord("a", "x", PASS, expected=FAIL)]).exit_code() == 1
    assert make([CheckRecord("a", "x", SKIPPED)]).exit_code() == 3


def test_records_sorted_and_round_trip():
    rep = make([CheckRecord("b", "y", FAIL, detail="d", witness="w", seconds=0.5), CheckRecord("a", "x", PASS)])
    assert [r.check_id for r in rep.records] == ["a", "b"]
    text = rep.to_json()
    back = SuiteReport.from_json(text)
    assert back.to_json() == text
    assert back.canonical() == rep.canonical()
    assert "seconds" not in json.dumps(rep.canonical())


def test_schema_version_checked():
    data = make([]).to_dict()
    data["schema_version"] = "0.1"
    with pytest.raises(ValueError):
        SuiteReport.from_dict(data)


def test_text_marks_expected_failures():
    text = make([CheckRecord("a", "x", FAIL, expected=FAIL, witness="w")]).render_text()
    assert "expected fail" in text and "witness: w" in text
