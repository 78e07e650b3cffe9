from __future__ import annotations

from fractions import Fraction

from qorbifold import QScalar, Report
from qorbifold.report import jsonable
from qorbifold.utils import _JSON_LOADER


def test_report_collects_checks():
    report = Report("demo", {"cutoff": 2})
    assert report.check("first", True)
    assert not report.check("second", False, {"value": 3}, count=1)
    assert not report.passed
    assert [c.name for c in report.failures()] == ["second"]
    assert report.get("first").witness is None
    assert report.get("missing") is None


def test_witness_dropped_on_success():
    report = Report("demo")
    report.check("ok", True, {"ignored": 1})
    assert report.checks[0].witness is None


def test_extend_prefixes_names():
    inner = Report("inner")
    inner.check("a", True)
    inner.note("remark")
    outer = Report("outer")
    outer.extend(inner, "sub")
    assert list(outer.names()) == ["sub/a"]
    assert outer.notes == ["remark"]


def test_json_output():
    report = Report("demo", {"q": 0.5}).finish()
    report.check("exact", True, value=QScalar(Fraction(1, 2)))
    data = _JSON_LOADER(report.to_json())
    assert data["suite"] == "demo"
    assert data["passed"] is True
    assert data["checks"][0]["detail"]["value"] == str(QScalar(Fraction(1, 2)))
    assert "elapsed_seconds" in data["timing"]


def test_jsonable():
    assert jsonable(Fraction(3, 4)) == "3/4"
    assert jsonable((1, {2: 1j})) == [1, {"2": [0.0, 1.0]}]
    assert jsonable({3, 1}) == [1, 3]
