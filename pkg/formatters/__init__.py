"""
报告格式化器模块
提供 JSON、CSV、纯文本三种输出格式
"""

from .base import BaseFormatter, Report
from .json_report import JsonReportFormatter
from .csv_report import CsvReportFormatter
from .text_report import TextReportFormatter

__all__ = [
    'BaseFormatter',
    'Report',
    'JsonReportFormatter',
    'CsvReportFormatter',
    'TextReportFormatter',
]
