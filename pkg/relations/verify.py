"""
编目恒等式的重新发现
对每个恒等式求出各数值，代入已发表的向量求残差，再在隐藏标签的情况下重新运行 PSLQ
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from contfrac import PSLQ_CONJECTURAL
from core.errors import DomainError, VerificationError
from core.numbers import BigReal, Precision
from .identities import Identity, get_identity_manager
from .pslq import IntegerRelation, RelationProblem, pslq

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdentityCheck:
    """
    属性:
        published_residual: Σ published[i]·values[i]
        recovered: PSLQ 重新找到的向量（未找到时为 None）
        digits_used: 求值所用的位数
    """
    name: str
    labels: tuple
    provenance: str
    published: tuple
    recovered: Optional[tuple]
    published_residual: BigReal
    digits_used: int
    confidence_digits: int

    @property
    def matched(self) -> bool:
        return self.recovered == self.published

    def as_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "labels": list(self.labels),
            "provenance": self.provenance,
            "published_vector": [str(a) for a in self.published],
            "recovered_vector": [str(a) for a in self.recovered] if self.recovered else None,
            "residual": self.published_residual.to_decimal(5),
            "digits_used": self.digits_used,
            "matched": self.matched,
        }


@dataclass
class IdentityReport:
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.matched for c in self.checks)

    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.matched]

    def as_dict(self) -> Dict[str, object]:
        return {"passed": self.passed, "identities": [c.as_dict() for c in self.checks]}


def _published_residual(values: Sequence[BigReal], vector: Sequence[int]) -> BigReal:
    total = BigReal.exact(0, values[0].prec_bits)
    for v, a in zip(values, vector):
        total = total + v * a
    return total


def check_identity(identity: Identity, prec: Precision, confidence_digits: Optional[int] = None,
                   max_levels: Optional[int] = None) -> IdentityCheck:
    """
    检验单个恒等式

    输入精度不足以支持置信位数时，自动把求值精度提高到所需位数。
    """
    confidence = confidence_digits or max(20, prec.target_digits - 20)
    labels = [f"x{i}" for i in range(len(identity.labels))]
    needed = RelationProblem.required_for(len(labels), identity.max_coeff, confidence)
    if prec.target_digits < needed:
        logger.warning(f"{identity.name}: 精度 {prec.target_digits} 位不足，提高到 {needed} 位")
        prec = Precision(needed, prec.guard_digits)
    values = identity.evaluate(prec, max_levels)
    residual = _published_residual(values, identity.published)
    # 标签隐藏，只给 PSLQ 数值
    result = pslq(RelationProblem.of(values, labels, identity.max_coeff, confidence))
    recovered = result.coefficients if isinstance(result, IntegerRelation) else None
    check = IdentityCheck(identity.name, identity.labels, identity.provenance, identity.published,
                          recovered, residual, prec.target_digits, confidence)
    if not check.matched:
        logger.error(f"{identity.name}: 重新发现的向量 {recovered} 与已发表的 {identity.published} 不符")
    elif identity.provenance == PSLQ_CONJECTURAL:
        logger.warning(f"{identity.name}: 数值上再次确认（仍属猜想）")
    else:
        logger.info(f"{identity.name}: 已重新发现 {recovered}")
    return check


def verify_catalog_identities(prec: Precision, names: Optional[Sequence[str]] = None,
                              confidence_digits: Optional[int] = None, max_levels: Optional[int] = None,
                              strict: bool = True) -> IdentityReport:
    """
    逐个检验编目的恒等式

    参数:
        prec: 求值精度
        names: 只检验这些恒等式，默认全部
        confidence_digits: PSLQ 的置信位数，默认 max(20, target_digits - 20)
        strict: 为 True 时有不符即抛出 VerificationError

    异常:
        DomainError: 名称不存在
        VerificationError: strict 且有向量不符
    """
    manager = get_identity_manager()
    names = list(names) if names else manager.names()
    unknown = [n for n in names if not manager.is_identity_supported(n)]
    if unknown:
        raise DomainError(f"未知的恒等式: {', '.join(unknown)}")
    report = IdentityReport()
    # mpmath 的工作精度是进程级状态，逐个运行
    for name in names:
        report.checks.append(check_identity(manager.get_identity(name), prec, confidence_digits, max_levels))
    if strict and not report.passed:
        raise VerificationError(f"恒等式重新发现失败: {', '.join(report.failures())}", report=report)
    return report
