"""
结果缓存模块
以 JSON 文件保存耗时的数值结果（键为命令与规范化参数的 sha256），高精度结果可服务低精度请求
"""

import os
import json
import math
import hashlib
import logging
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

import mpmath
from mpmath import mp, mpf

from .numbers import BigReal

logger = logging.getLogger(__name__)

CACHE_VERSION = 1


class ResultCache:
    """
    结果缓存

    参数:
        directory: 缓存目录（首次写入时创建）
        enabled: 为 False 时读写均跳过
    """

    def __init__(self, directory: Path, enabled: bool = True):
        self.directory = Path(directory).expanduser()
        self.enabled = enabled

    @staticmethod
    def key(command: str, params: Dict[str, Any]) -> str:
        canonical = json.dumps({"command": command, "params": params}, sort_keys=True, ensure_ascii=False,
                               separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def path_for(self, command: str, params: Dict[str, Any]) -> Path:
        return self.directory / f"{command}-{self.key(command, params)[:32]}.json"

    def _read(self, path: Path) -> Optional[Dict[str, Any]]:
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = json.load(f)
            if entry.get("version") != CACHE_VERSION:
                logger.info(f"缓存版本不符，忽略: {path}")
                return None
            entry["digits"] = int(entry["digits"])
            return entry
        except (OSError, ValueError, KeyError, TypeError, AttributeError) as e:
            logger.warning(f"缓存文件已损坏，跳过: {path} ({e})")
            return None

    def load(self, command: str, params: Dict[str, Any], digits: int) -> Optional[BigReal]:
        """
        读取缓存的数值

        参数:
            command: 命令名
            params: 规范化参数（不含精度）
            digits: 请求的位数

        返回:
            缓存位数不低于请求位数时返回 BigReal，否则 None
        """
        if not self.enabled:
            return None
        path = self.path_for(command, params)
        entry = self._read(path)
        if entry is None or entry["digits"] < digits:
            return None
        try:
            bits = int(entry["bits"])
            with mp.workprec(bits):
                value = mpf(entry["value"])
                radius = mpf(entry["radius"])
                # 十进制字符串的舍入误差
                radius += abs(value) * mpf(10) ** (1 - int(entry["value_digits"]))
                result = BigReal(value, radius, bits)
        except (KeyError, ValueError, TypeError) as e:
            logger.warning(f"缓存内容无效，跳过: {path} ({e})")
            return None
        logger.info(f"命中缓存: {command} {params}（{entry['digits']} 位）")
        return result

    def store(self, command: str, params: Dict[str, Any], digits: int, value: BigReal) -> None:
        """
        写入缓存（已有位数更高的结果时不覆盖）

        先写临时文件再 os.replace，避免读到写了一半的文件。
        """
        if not self.enabled:
            return
        path = self.path_for(command, params)
        existing = self._read(path)
        if existing is not None and existing["digits"] >= digits:
            return
        with mp.workprec(value.prec_bits):
            full_digits = math.ceil(value.prec_bits * math.log10(2)) + 1
            entry = {
                "version": CACHE_VERSION,
                "command": command,
                "params": params,
                "digits": digits,
                "bits": value.prec_bits,
                "value": mpmath.nstr(value.value, full_digits, strip_zeros=False),
                "value_digits": full_digits,
                "radius": mpmath.nstr(value.radius * (1 + mpf(10) ** -5), 17),
            }
        self._write(path, entry)

    @staticmethod
    def _report_params(params: Dict[str, Any], digits: int) -> Dict[str, Any]:
        # 报告里的数值字符串按请求位数截断，位数是键的一部分
        return dict(params, digits=digits)

    def load_report(self, command: str, params: Dict[str, Any], digits: int) -> Optional[Dict[str, Any]]:
        """
        读取缓存的整份报告

        参数:
            command: 命令名
            params: 规范化参数（不含精度）
            digits: 请求的位数

        返回:
            同一命令、参数与位数下存过的报告，否则 None
        """
        if not self.enabled:
            return None
        path = self.path_for(command, self._report_params(params, digits))
        entry = self._read(path)
        if entry is None or entry["digits"] != digits or not isinstance(entry.get("report"), dict):
            return None
        logger.info(f"命中缓存: {command} {params}（{digits} 位报告）")
        return entry["report"]

    def store_report(self, command: str, params: Dict[str, Any], digits: int, report: Dict[str, Any]) -> None:
        """写入整份报告（报告中只含字符串、整数、布尔值与列表）"""
        if not self.enabled:
            return
        path = self.path_for(command, self._report_params(params, digits))
        entry = {"version": CACHE_VERSION, "command": command, "params": params, "digits": digits,
                 "report": report}
        self._write(path, entry)

    def _write(self, path: Path, entry: Dict[str, Any]) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(entry, f, ensure_ascii=False, indent=2, default=str)
            os.replace(tmp, path)
            logger.debug(f"已写入缓存: {path}")
        except OSError as e:
            logger.warning(f"无法写入缓存 {path}: {e}")
