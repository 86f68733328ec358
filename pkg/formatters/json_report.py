"""
JSON 报告格式化器
"""

import json

from .base import BaseFormatter, Report


class JsonReportFormatter(BaseFormatter):
    """JSON 格式化器（字段顺序固定，同一报告输出逐字节相同）"""

    @property
    def format_name(self) -> str:
        return "json"

    @property
    def file_extension(self) -> str:
        return ".json"

    @property
    def description(self) -> str:
        return "JSON 报告（数值为十进制字符串）"

    def format(self, title: str, report: Report, indent: int = 2, **options) -> str:
        """
        参数:
            title: 写入 "command" 字段
            indent: 缩进空格数
        """
        payload = {"command": title}
        payload.update(report)
        return json.dumps(payload, ensure_ascii=False, indent=indent, default=str) + "\n"
