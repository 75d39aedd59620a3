import json

import pandas as pd
import pytest

from pupil_labs.rel_frobenius.enumeration import census
from pupil_labs.rel_frobenius.formats.report import (
    export_census_csv,
    render,
    render_census,
)
from pupil_labs.rel_frobenius.reports import ValidationReport


@pytest.fixture
def report() -> ValidationReport:
    report = ValidationReport("frobenius")
    report.add("M", True)
    report.add("U", False, ("a", frozenset({"b", "c"})), note="no unit")
    return report


def test_text_rendering(report):
    assert render(report) == (
        "frobenius: FAIL\n"
        "  M  ok\n"
        "  U  FAILED  witness: (a, {b, c})  (no unit)\n"
    )


def test_json_rendering(report):
    data = json.loads(render(report, "json"))
    assert data == {
        "kind": "frobenius",
        "passed": False,
        "axioms": [
            {"id": "M", "passed": True},
            {"id": "U", "passed": False, "witness": ["a", ["b", "c"]], "note": "no unit"},
        ],
    }


def test_unknown_format(report):
    with pytest.raises(ValueError, match="unknown report format"):
        render(report, "yaml")


def test_census_rendering_and_export(tmp_path):
    result = census("groupoid", 2)
    text = render_census(result)
    assert text.startswith("groupoid structures of size 2: 3\n")
    assert json.loads(render_census(result, "json"))["count"] == 3

    destination = tmp_path / "out" / "groupoids.csv"
    export_census_csv(result, destination)
    frame = pd.read_csv(destination, keep_default_na=False)
    assert len(frame) == 3
    assert set(frame["kind"]) == {"groupoid"}
