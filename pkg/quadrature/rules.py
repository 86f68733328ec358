"""
双指数求积节点模块
(0,1] 上的 tanh-sinh 型变换与 [1,∞) 上的指数衰减型变换，按 (精度, 层) 缓存
"""

import math
import logging
from threading import Lock
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mp, mpf
from mpmath.calculus.quadrature import GaussLegendre

from core.specfun import bessel_values
from .products import BesselTuple

logger = logging.getLogger(__name__)

FINITE = "finite"
TAIL = "tail"


class Node:
    """
    单个求积节点

    属性:
        x: 横坐标
        xc: 对 (0,1] 规则为 1-x（精确保留靠近 1 的信息），对尾部规则为 x-1
        weight: dx/dt
    """
    __slots__ = ("x", "xc", "weight", "_bessel", "_lock")

    def __init__(self, x: mpf, xc: mpf, weight: mpf):
        self.x = x
        self.xc = xc
        self.weight = weight
        self._bessel: Dict[bool, BesselTuple] = {}
        self._lock = Lock()

    def bessel(self, bits: int, need_i: bool) -> BesselTuple:
        """节点上的 (I₀, I₁, K₀, K₁)，首次访问时计算"""
        cached = self._bessel.get(True) or self._bessel.get(need_i)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._bessel.get(True) or self._bessel.get(need_i)
            if cached is None:
                cached = bessel_values(self.x, bits, need_i=need_i)
                self._bessel[cached[0] is not None] = cached
            return cached


class DERule:
    """
    双指数求积规则

    第 0 层取 t = j（整数），第 ℓ 层新增 t = j/2^ℓ（j 为奇数），
    第 ℓ 层的近似值为 h_ℓ·Σ w·f，h_ℓ = 2^-ℓ。
    """

    def __init__(self, kind: str, bits: int):
        if kind not in (FINITE, TAIL):
            raise ValueError(f"未知的规则类型: {kind}")
        self.kind = kind
        self.bits = bits
        self._levels: Dict[int, List[Node]] = {}
        self._lock = Lock()
        ln2 = math.log(2)
        if kind == FINITE:
            # 权重小于 eps² 处截断
            t_max = math.asinh(2 * bits * ln2 / math.pi)
            self.t_range = (-t_max, t_max)
        else:
            t_min = -math.log(2 * bits * ln2 + 10)
            t_max = math.log(2 * bits * ln2 + 400) + 1
            self.t_range = (t_min, t_max)

    def _make_node(self, t: mpf) -> Node:
        if self.kind == FINITE:
            s = mp.pi / 2 * mpmath.sinh(t)
            e = mpmath.exp(-2 * s)
            x = 1 / (1 + e)
            xc = e / (1 + e)
            weight = mp.pi * mpmath.cosh(t) * x * xc
            return Node(x, xc, weight)
        et = mpmath.exp(t - mpmath.exp(-t))
        return Node(1 + et, et, (1 + mpmath.exp(-t)) * et)

    def nodes(self, level: int) -> List[Node]:
        """第 level 层新增的节点（按 x 升序）"""
        cached = self._levels.get(level)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._levels.get(level)
            if cached is None:
                cached = self._build(level)
                self._levels[level] = cached
            return cached

    def _build(self, level: int) -> List[Node]:
        lo, hi = self.t_range
        scale = 2 ** level
        j_lo = math.ceil(lo * scale)
        j_hi = math.floor(hi * scale)
        nodes = []
        with mp.workprec(self.bits + 20):
            for j in range(j_lo, j_hi + 1):
                if level > 0 and j % 2 == 0:
                    continue
                node = self._make_node(mpf(j) / scale)
                # 靠近 1 的节点在工作精度下与 1 重合，只保留 xc 可分辨的节点
                if self.kind == FINITE and node.xc == 0:
                    continue
                nodes.append(node)
        with mp.workprec(self.bits):
            for node in nodes:
                node.x, node.xc, node.weight = +node.x, +node.xc, +node.weight
        logger.debug(f"{self.kind} 规则 bits={self.bits} 第 {level} 层: {len(nodes)} 个节点")
        return nodes


# 全局规则缓存
_rules: Dict[Tuple[str, int], DERule] = {}
_rules_lock = Lock()


def get_rule(kind: str, bits: int) -> DERule:
    """获取（必要时创建）给定类型与精度的规则"""
    key = (kind, bits)
    rule = _rules.get(key)
    if rule is None:
        with _rules_lock:
            rule = _rules.get(key)
            if rule is None:
                rule = DERule(kind, bits)
                _rules[key] = rule
    return rule


def tail_cutoff(bits: int, p: int, decay: int) -> mpf:
    """
    尾部截断点：u^p·e^{-decay·u} 小于 2^-bits 的位置

    参数:
        bits: 工作精度
        p: 多项式幂次
        decay: 指数衰减率
    """
    base = bits * math.log(2)
    return mpf(1 + (base + (p + 2) * math.log(base / decay + 2) + 20) / decay)


_gl_nodes: Dict[Tuple[int, int], List[Tuple[mpf, mpf]]] = {}
_gl_lock = Lock()


def gauss_legendre_nodes(degree: int, bits: int) -> List[Tuple[mpf, mpf]]:
    """[-1,1] 上 3·2^(degree-1) 点的 Gauss-Legendre 节点与权重"""
    key = (degree, bits)
    nodes = _gl_nodes.get(key)
    if nodes is None:
        with _gl_lock:
            nodes = _gl_nodes.get(key)
            if nodes is None:
                with mp.workprec(bits):
                    nodes = GaussLegendre(mp).calc_nodes(degree, bits)
                _gl_nodes[key] = nodes
    return nodes


def gauss_legendre_degree(points: int) -> Optional[int]:
    """不少于 points 个点的最小阶数（最多 96 点，超出返回 None）"""
    for degree in range(1, 7):
        if 3 * 2 ** (degree - 1) >= points:
            return degree
    return None
