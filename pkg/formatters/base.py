"""
报告格式化器抽象基类
所有报告格式化器都应继承此类

报告是一个 dict：标量字段为字符串、整数或布尔值（数值一律为十进制字符串），
表格放在 "rows" 字段中（dict 列表）。
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple

Report = Dict[str, Any]


def flatten(data: Dict[str, Any], prefix: str = "") -> List[Tuple[str, Any]]:
    """嵌套 dict 展开为 (a.b.c, 值) 列表，列表值按下标展开"""
    items: List[Tuple[str, Any]] = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items.extend(flatten(value, f"{name}."))
        elif isinstance(value, list) and any(isinstance(v, dict) for v in value):
            for i, v in enumerate(value):
                items.extend(flatten(v, f"{name}.{i}.") if isinstance(v, dict) else [(f"{name}.{i}", v)])
        else:
            items.append((name, value))
    return items


def cell(value: Any) -> str:
    """单元格文本"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(cell(v) for v in value)
    return str(value)


class BaseFormatter(ABC):
    """报告格式化器抽象基类"""

    @property
    @abstractmethod
    def format_name(self) -> str:
        """格式名称（如 'json', 'csv', 'text'）"""
        pass

    @property
    @abstractmethod
    def file_extension(self) -> str:
        """文件扩展名（如 '.json', '.csv', '.txt'）"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """格式描述"""
        pass

    @abstractmethod
    def format(self, title: str, report: Report, **options) -> str:
        """
        将报告格式化为目标格式

        参数:
            title: 报告标题（通常为命令名）
            report: 报告内容
            **options: 格式特定的选项

        返回:
            格式化后的文本
        """
        pass

    def save(self, content: str, filename: str) -> None:
        """
        保存格式化后的内容到文件

        参数:
            content: format() 方法返回的内容
            filename: 输出文件路径
        """
        with open(filename, 'w', encoding='utf-8', newline='') as f:
            f.write(content)

    def export(self, title: str, report: Report, filename: str, **options) -> str:
        """
        完整的导出流程：格式化 + 保存

        返回:
            输出文件路径
        """
        content = self.format(title, report, **options)
        self.save(content, filename)
        return filename
