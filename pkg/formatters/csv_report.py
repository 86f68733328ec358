"""
CSV 报告格式化器
有表格（rows）时逐行输出表格，否则输出 key,value 两列
"""

import csv
import io
from typing import Any, Dict, List

from .base import BaseFormatter, Report, cell, flatten


class CsvReportFormatter(BaseFormatter):
    """CSV 格式化器"""

    @property
    def format_name(self) -> str:
        return "csv"

    @property
    def file_extension(self) -> str:
        return ".csv"

    @property
    def description(self) -> str:
        return "CSV 表格（与 JSON 的 rows 一一对应）"

    @staticmethod
    def _columns(rows: List[Dict[str, Any]]) -> List[str]:
        columns: List[str] = []
        for row in rows:
            for key, _ in flatten(row):
                if key not in columns:
                    columns.append(key)
        return columns

    def format(self, title: str, report: Report, **options) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        rows = report.get("rows")
        if isinstance(rows, list) and rows:
            flat_rows = [dict(flatten(row)) for row in rows]
            columns = self._columns(rows)
            writer.writerow(columns)
            for row in flat_rows:
                writer.writerow([cell(row.get(c)) for c in columns])
        else:
            writer.writerow(["key", "value"])
            writer.writerow(["command", title])
            for key, value in flatten(report):
                writer.writerow([key, cell(value)])
        return buffer.getvalue()
