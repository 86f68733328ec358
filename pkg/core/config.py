"""
配置模块
从环境变量读取实验室的默认参数
"""

import os
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

from .errors import DomainError

logger = logging.getLogger(__name__)

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env(name: str, default, cast: Callable):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise DomainError(f"环境变量 {name} 的值无效: {raw!r}")


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise ValueError(raw)
    return value


def _log_level(raw: str) -> str:
    level = raw.upper()
    if level not in _LOG_LEVELS:
        raise ValueError(raw)
    return level


@dataclass(frozen=True)
class LabConfig:
    """实验室配置"""
    default_digits: int = 50
    guard_digits: int = 10
    cache_dir: Path = field(default_factory=lambda: Path.home() / ".cache" / "bessel_lab")
    log_level: str = "WARNING"
    max_levels: int = 12
    cf_depth: int = 300
    qmc_log2_samples: int = 16
    workers: int = 4

    @classmethod
    def from_env(cls) -> "LabConfig":
        """
        从环境变量构造配置

        异常:
            DomainError: 如果某个环境变量的值无效
        """
        defaults = cls()
        return cls(
            default_digits=_env("BESSEL_LAB_DIGITS", defaults.default_digits, _positive_int),
            guard_digits=_env("BESSEL_LAB_GUARD_DIGITS", defaults.guard_digits, _positive_int),
            cache_dir=_env("BESSEL_LAB_CACHE_DIR", defaults.cache_dir, Path),
            log_level=_env("BESSEL_LAB_LOG_LEVEL", defaults.log_level, _log_level),
            max_levels=_env("BESSEL_LAB_MAX_LEVELS", defaults.max_levels, _positive_int),
            cf_depth=_env("BESSEL_LAB_CF_DEPTH", defaults.cf_depth, _positive_int),
            qmc_log2_samples=_env("BESSEL_LAB_QMC_SAMPLES", defaults.qmc_log2_samples, _positive_int),
            workers=_env("BESSEL_LAB_WORKERS", defaults.workers, _positive_int),
        )

    def override(self, **changes) -> "LabConfig":
        """返回覆盖了部分字段的新配置（值为 None 的字段忽略）"""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


# 全局配置实例（首次访问时读取环境变量）
_global_config: Optional[LabConfig] = None


def get_config() -> LabConfig:
    """获取全局配置实例"""
    global _global_config
    if _global_config is None:
        _global_config = LabConfig.from_env()
        logger.debug(f"已加载配置: {_global_config}")
    return _global_config


def reset_config() -> None:
    """丢弃缓存的配置，下次访问时重新读取环境变量"""
    global _global_config
    _global_config = None


def set_config(config: LabConfig) -> None:
    """替换全局配置（命令行参数覆盖环境变量时使用）"""
    global _global_config
    _global_config = config
