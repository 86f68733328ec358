"""
恒等式管理器
负责注册、管理已编目的整数关系（已发表的整数向量、数值标签、来源与求值函数）
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from contfrac import PROVED, PSLQ_CONJECTURAL, cf_value, get_entry
from core.numbers import BigReal, Precision
from core.specfun import zeta
from quadrature import BesselProduct, i_rho2_alpha6, moment, symmetric_nested

logger = logging.getLogger(__name__)

# (精度, 最大层数) -> 各标签的数值
Evaluator = Callable[[Precision, Optional[int]], List[BigReal]]


@dataclass(frozen=True)
class Identity:
    """
    一个编目的整数关系 Σ published[i]·values[i] = 0

    属性:
        name: 名称
        labels: 数值名称
        published: 去分母后的整数向量（规范形式：互素、首个非零项为正）
        provenance: proved 或 pslq_conjectural
        evaluator: 按精度给出各数值
        description: 说明
    """
    name: str
    labels: Tuple[str, ...]
    published: Tuple[int, ...]
    provenance: str
    evaluator: Evaluator
    description: str = ""

    @property
    def max_coeff(self) -> int:
        """PSLQ 的系数上限：已发表向量最大分量的上一个 10 的幂"""
        largest = max(abs(a) for a in self.published)
        return 10 ** (len(str(largest)) + 1)

    def evaluate(self, prec: Precision, max_levels: Optional[int] = None) -> List[BigReal]:
        return self.evaluator(prec, max_levels)


def integer_vector(lhs: int, rhs: Sequence[Fraction]) -> Tuple[int, ...]:
    """
    lhs·x₀ = Σ rhs[i]·x_{i+1} 去分母后的规范整数向量 (lhs·L, -rhs[0]·L, ...)
    """
    coeffs = [Fraction(lhs)] + [-Fraction(c) for c in rhs]
    common = 1
    for c in coeffs:
        common = math.lcm(common, c.denominator)
    ints = [int(c * common) for c in coeffs]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    ints = [a // g for a in ints]
    if next(a for a in ints if a) < 0:
        ints = [-a for a in ints]
    return tuple(ints)


def _one(prec: Precision) -> BigReal:
    return BigReal.exact(1, prec.bits)


def _moments(*products: BesselProduct) -> Evaluator:
    def evaluate(prec: Precision, max_levels: Optional[int]) -> List[BigReal]:
        return [moment(p, prec, max_levels).value for p in products]
    return evaluate


_U_K04 = BesselProduct(1, 4)
_U_K06 = BesselProduct(1, 6)
_U3_K06 = BesselProduct(3, 6)


def _zeta5_kappa8(prec, max_levels):
    return [zeta(5, prec)] + _moments(BesselProduct(1, 8), BesselProduct(3, 8))(prec, max_levels)


def _i_rho2_alpha6(prec, max_levels):
    return ([i_rho2_alpha6(prec, max_levels=max_levels).value]
            + _moments(_U_K06, _U3_K06)(prec, max_levels) + [zeta(5, prec)])


def _symmetric(n: int, m: int, with_one: bool) -> Evaluator:
    def evaluate(prec, max_levels):
        values = [symmetric_nested(n, m, prec, max_levels).value]
        values += _moments(_U_K06, _U3_K06)(prec, max_levels)
        if with_one:
            # 带常数项的关系里权 3 的位置是 ∫uK₀⁴ = 7ζ(3)/8
            values.append(_one(prec))
            values += _moments(_U_K04)(prec, max_levels)
        else:
            values.append(zeta(3, prec))
        return values + [zeta(5, prec)]
    return evaluate


def _kappa4_basis(prec, max_levels):
    return [_one(prec)] + _moments(BesselProduct(1, 4), BesselProduct(3, 4))(prec, max_levels)


def _by_parts(prec, max_levels):
    return _moments(BesselProduct(3, 4, 2), _U_K06, _U3_K06)(prec, max_levels)


def _cf_target(name: str, zeta_s: int) -> Evaluator:
    def evaluate(prec, max_levels):
        z0 = cf_value(get_entry(name), prec=prec)
        return [z0, _one(prec), 1 / zeta(zeta_s, prec)]
    return evaluate


_SIX = ("∫uK0^6", "∫u^3K0^6")


def _default_identities() -> List[Identity]:
    return [
        Identity("zeta5_kappa8", ("zeta(5)", "∫uK0^8", "∫u^3K0^8"), (77, -1, 72), PSLQ_CONJECTURAL,
                 _zeta5_kappa8, "77ζ(5) = ∫uK₀⁸ - 72∫u³K₀⁸"),
        Identity("i_rho2_alpha6", ("I_rho2alpha6",) + _SIX + ("zeta(5)",),
                 integer_vector(1, [Fraction(1, 30), Fraction(1, 20), Fraction(-31, 160)]),
                 PSLQ_CONJECTURAL, _i_rho2_alpha6, "I_{ρ²α⁶} 的权 6 分解"),
        Identity("nested_f3g1", ("zt(f3,g1)+zt(f1,g3)",) + _SIX + ("zeta(3)", "zeta(5)"),
                 integer_vector(1, [Fraction(1, 48), Fraction(-3, 160), Fraction(-7, 96), Fraction(-31, 1280)]),
                 PSLQ_CONJECTURAL, _symmetric(3, 1, False), "对称嵌套和 (f₃, g₁)"),
        Identity("nested_f5g1", ("zt(f5,g1)+zt(f1,g5)",) + _SIX + ("1", "∫uK0^4", "zeta(5)"),
                 integer_vector(1, [Fraction(211, 11520), Fraction(3953, 23040), Fraction(11, 9216),
                                    Fraction(-1, 9), Fraction(-93, 5120)]),
                 PSLQ_CONJECTURAL, _symmetric(5, 1, True), "对称嵌套和 (f₅, g₁)"),
        Identity("nested_f7g1", ("zt(f7,g1)+zt(f1,g7)",) + _SIX + ("1", "∫uK0^4", "zeta(5)"),
                 integer_vector(1, [Fraction(108731, 1728000), Fraction(4256617, 3456000), Fraction(27877, 460800),
                                    Fraction(-8, 15), Fraction(-279, 5120)]),
                 PSLQ_CONJECTURAL, _symmetric(7, 1, True), "对称嵌套和 (f₇, g₁)"),
        Identity("nested_f3g5", ("zt(f3,g5)+zt(f5,g3)",) + _SIX + ("1", "∫uK0^4", "zeta(5)"),
                 integer_vector(1, [Fraction(-28921, 691200), Fraction(1151533, 1382400), Fraction(14653, 184320),
                                    Fraction(25, 192), Fraction(279, 20480)]),
                 PSLQ_CONJECTURAL, _symmetric(3, 5, True), "对称嵌套和 (f₃, g₅)"),
        Identity("kappa4_basis", ("1", "∫uK0^4", "∫u^3K0^4"), (3, -4, 16), PROVED,
                 _kappa4_basis, "4∫uK₀⁴ - 16∫u³K₀⁴ = 3"),
        Identity("by_parts_weight6", ("∫u^3K0^4K1^2",) + _SIX,
                 integer_vector(1, [Fraction(2, 15), Fraction(-1, 5)]), PROVED,
                 _by_parts, "分部积分：∫u³K₀⁴K₁² = (2/15)∫uK₀⁶ - (1/5)∫u³K₀⁶"),
        Identity("cf_zeta2_pslq", ("z0", "1", "1/zeta(2)"), integer_vector(1, [Fraction(-4), Fraction(7)]),
                 PSLQ_CONJECTURAL, _cf_target("zeta2_pslq", 2), "z(0) = 7/ζ(2) - 4"),
        Identity("cf_zeta3_pslq", ("z0", "1", "1/zeta(3)"), integer_vector(1, [Fraction(-1), Fraction(8, 7)]),
                 PSLQ_CONJECTURAL, _cf_target("zeta3_pslq", 3), "z(0) = 8/(7ζ(3)) - 1"),
    ]


class IdentityManager:
    """恒等式管理器"""

    def __init__(self):
        self._identities: Dict[str, Identity] = {}
        self._register_default_identities()

    def _register_default_identities(self):
        """注册默认的恒等式"""
        for identity in _default_identities():
            self.register(identity)

    def register(self, identity: Identity):
        """
        注册一个恒等式

        参数:
            identity: 恒等式实例（同名覆盖）
        """
        self._identities[identity.name] = identity

    def unregister(self, name: str):
        """
        注销一个恒等式

        参数:
            name: 恒等式名称
        """
        if name in self._identities:
            del self._identities[name]

    def get_identity(self, name: str) -> Optional[Identity]:
        """
        获取指定的恒等式

        返回:
            恒等式实例，如果不存在则返回 None
        """
        return self._identities.get(name)

    def list_identities(self) -> List[Dict[str, str]]:
        """
        列出所有恒等式

        返回:
            每项包含 name, provenance, description
        """
        return [
            {"name": identity.name, "provenance": identity.provenance, "description": identity.description}
            for identity in self._identities.values()
        ]

    def is_identity_supported(self, name: str) -> bool:
        return name in self._identities

    def names(self) -> List[str]:
        return list(self._identities)


# 全局恒等式管理器实例
_global_manager: Optional[IdentityManager] = None


def get_identity_manager() -> IdentityManager:
    """获取全局恒等式管理器实例"""
    global _global_manager
    if _global_manager is None:
        _global_manager = IdentityManager()
    return _global_manager
