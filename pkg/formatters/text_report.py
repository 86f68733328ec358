"""
纯文本报告格式化器
"""

from typing import List

from .base import BaseFormatter, Report, cell, flatten


class TextReportFormatter(BaseFormatter):
    """纯文本格式化器：标量字段逐行列出，表格按列对齐"""

    @property
    def format_name(self) -> str:
        return "text"

    @property
    def file_extension(self) -> str:
        return ".txt"

    @property
    def description(self) -> str:
        return "对齐的纯文本报告"

    def format(self, title: str, report: Report, **options) -> str:
        lines = [f"# {title}"]
        scalars = [(k, v) for k, v in report.items() if k != "rows"]
        for key, value in flatten(dict(scalars)):
            lines.append(f"{key}: {cell(value)}")
        rows = report.get("rows")
        if isinstance(rows, list) and rows:
            flat = [dict(flatten(row)) for row in rows]
            columns: List[str] = []
            for row in flat:
                columns.extend(k for k in row if k not in columns)
            widths = {c: max(len(c), *(len(cell(row.get(c))) for row in flat)) for c in columns}
            lines.append("")
            lines.append("  ".join(c.ljust(widths[c]) for c in columns).rstrip())
            lines.append("  ".join("-" * widths[c] for c in columns))
            for row in flat:
                lines.append("  ".join(cell(row.get(c)).ljust(widths[c]) for c in columns).rstrip())
        return "\n".join(lines) + "\n"
