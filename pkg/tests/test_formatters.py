"""
Tests for formatters - JSON / CSV / 纯文本报告
"""
import json

import pytest

from core.errors import DomainError
from format_manager import ReportFormatManager, get_format_manager
from formatters import CsvReportFormatter, JsonReportFormatter, TextReportFormatter
from formatters.base import cell, flatten


REPORT = {
    "digits": 30,
    "passed": False,
    "meta": {"kappa": 4, "basis": {"m1": "7/384"}},
    "rows": [
        {"k": 1, "p": "6", "q": "5", "ratio": "1.2"},
        {"k": 2, "p": "702", "q": "584", "ratio": None},
    ],
}


class TestHelpers:
    """Test flatten and cell"""

    def test_flatten_nested(self):
        """Test dotted keys for nested dicts"""
        assert flatten({"a": {"b": {"c": 1}}, "d": 2}) == [("a.b.c", 1), ("d", 2)]

    def test_flatten_list_of_dicts(self):
        """Test indexed keys for lists of dicts"""
        assert flatten({"checks": [{"k": 1}, {"k": 2}]}) == [("checks.0.k", 1), ("checks.1.k", 2)]

    def test_flatten_keeps_plain_lists(self):
        """Test that scalar lists stay whole"""
        assert flatten({"v": [1, 2]}) == [("v", [1, 2])]

    def test_cell(self):
        """Test cell text for None, booleans and lists"""
        assert cell(None) == ""
        assert cell(True) == "true"
        assert cell(["3", "-4", "16"]) == "3 -4 16"


class TestFormatters:
    """Test the three report formats"""

    def test_json(self):
        """Test that the command comes first and values are preserved"""
        text = JsonReportFormatter().format("cf convergents", REPORT)
        assert text.startswith('{\n  "command": "cf convergents"')
        data = json.loads(text)
        assert data["rows"][1]["ratio"] is None
        assert data["meta"]["basis"]["m1"] == "7/384"

    def test_json_is_stable(self):
        """Test byte-identical output for the same report"""
        formatter = JsonReportFormatter()
        assert formatter.format("x", REPORT) == formatter.format("x", dict(REPORT))

    def test_csv_rows(self):
        """Test one CSV line per row"""
        lines = CsvReportFormatter().format("cf convergents", REPORT).splitlines()
        assert lines == ["k,p,q,ratio", "1,6,5,1.2", "2,702,584,"]

    def test_csv_without_rows(self):
        """Test key,value output for scalar reports"""
        lines = CsvReportFormatter().format("decompose", {"one": "-9/512", "basis": {"m1": "7/384"}}).splitlines()
        assert lines == ["key,value", "command,decompose", "one,-9/512", "basis.m1,7/384"]

    def test_text(self):
        """Test aligned text output"""
        lines = TextReportFormatter().format("cf convergents", REPORT).splitlines()
        assert lines[0] == "# cf convergents"
        assert "passed: false" in lines
        assert "meta.basis.m1: 7/384" in lines
        header = lines.index("k  p    q    ratio")
        assert lines[header + 2] == "1  6    5    1.2"


class TestFormatManager:
    """Test the format registry"""

    def test_default_formats(self):
        """Test the registered formats"""
        assert get_format_manager().names() == ["json", "csv", "text"]
        extensions = {f["name"]: f["extension"] for f in get_format_manager().list_formats()}
        assert extensions == {"json": ".json", "csv": ".csv", "text": ".txt"}

    def test_unsupported(self):
        """Test that an unknown format is rejected"""
        with pytest.raises(DomainError):
            get_format_manager().render("xml", "x", REPORT)

    def test_unregister(self):
        """Test removing a format from a private manager"""
        manager = ReportFormatManager()
        manager.unregister("text")
        assert not manager.is_format_supported("text")
        assert get_format_manager().is_format_supported("text")

    def test_export(self, tmp_path):
        """Test writing a report to disk"""
        target = tmp_path / "report.csv"
        path = get_format_manager().export("csv", "cf convergents", REPORT, str(target))
        assert path == str(target)
        assert target.read_text(encoding="utf-8").startswith("k,p,q,ratio")
