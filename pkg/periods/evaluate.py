"""
周期积分的数值求值
单纯形经 a₁=s₁, a₂=s₂(1-s₁), … 映射到单位立方体；低维用张量双指数求积，高维用随机化 Sobol 拟蒙特卡洛
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import mpmath
from mpmath import mp, mpf
from scipy.stats import qmc

from core.config import get_config
from core.errors import DomainError, PrecisionError
from core.numbers import BigReal, Precision
from quadrature import QuadratureResult, integrate_unit_interval, moment
from quadrature.integrator import MIN_LEVELS
from quadrature.rules import FINITE, Node, get_rule
from .integrands import LOG_KERNEL, PeriodSpec, appendix_identity_point, log_kernel_point, simplex_point

logger = logging.getLogger(__name__)

AUTO = "auto"
DETERMINISTIC = "deterministic"
QMC = "qmc"
MODES = (AUTO, DETERMINISTIC, QMC)

# auto 模式下张量求积的最大维数
MAX_TENSOR_DIMENSION = 3
# 张量求积允许的最大求值次数
TENSOR_NODE_BUDGET = 4_000_000
MIN_RANDOMIZATIONS = 2
DEFAULT_RANDOMIZATIONS = 8
# QMC 误差条取几倍标准误
_QMC_SIGMAS = 3
_QMC_BITS = 64

PointFunction = Callable[[Sequence, object, object], object]


@dataclass(frozen=True)
class PeriodResult:
    """
    属性:
        spec: 周期表示
        integral: 周期积分本身的值
        mode: deterministic 或 qmc
        certified: 误差界是否为求积误差估计（QMC 为统计误差条，不作保证）
        evaluations: 被积函数求值次数
    """
    spec: PeriodSpec
    integral: QuadratureResult
    mode: str
    certified: bool
    evaluations: int

    @property
    def moment_value(self) -> QuadratureResult:
        """换算为对应的 Bessel 矩"""
        return self.integral.scaled(self.spec.normalization)

    def as_dict(self, digits: int) -> Dict[str, object]:
        moment_value = self.moment_value
        return {
            "form": self.spec.form,
            "n": self.spec.n,
            "p": self.spec.p,
            "dimension": self.spec.dimension,
            "mode": self.mode,
            "certified": self.certified,
            "integral": self.integral.value.to_decimal(digits),
            "normalization": str(self.spec.normalization),
            "moment": moment_value.value.to_decimal(digits),
            "error": mpmath.nstr(moment_value.error_estimate.value, 3),
            "evaluations": self.evaluations,
        }


@dataclass(frozen=True)
class PeriodCheck:
    """周期表示与直接 Bessel 求积的比较"""
    period: PeriodResult
    direct: QuadratureResult
    difference: BigReal

    @property
    def agrees(self) -> bool:
        return self.difference.contains(0)

    def as_dict(self, digits: int) -> Dict[str, object]:
        result = self.period.as_dict(digits)
        result.update({
            "direct": self.direct.value.to_decimal(digits),
            "difference": mpmath.nstr(self.difference.value, 3),
            "agrees": self.agrees,
        })
        return result


def _point_function(spec: PeriodSpec) -> PointFunction:
    if spec.form == LOG_KERNEL:
        return lambda a, r, one: log_kernel_point(spec, a, r, one)
    return lambda a, r, one: simplex_point(spec, a, r, one)


def _stick_breaking(coords: Sequence[Tuple[object, object]], one) -> Tuple[List, object, object]:
    """
    (sᵢ, 1-sᵢ) -> (a, 1-Σa, 雅可比行列式)

    aᵢ = sᵢ·rᵢ₋₁，rᵢ = rᵢ₋₁·(1-sᵢ)，r₀ = 1；雅可比行列式为 ∏ rᵢ₋₁。
    """
    a = []
    r = one
    jac = one
    for s, sc in coords:
        a.append(s * r)
        jac = jac * r
        r = r * sc
    return a, r, jac


def _tensor_row(f: PointFunction, first: Node, rest: Sequence[Sequence[Node]]) -> Tuple[mpf, mpf, int]:
    total = mpf(0)
    total_abs = mpf(0)
    count = 0
    one = mpf(1)
    for tail in itertools.product(*rest):
        nodes = (first,) + tail
        a, r, jac = _stick_breaking([(node.x, node.xc) for node in nodes], one)
        weight = jac
        for node in nodes:
            weight *= node.weight
        term = weight * f(a, r, one)
        total += term
        total_abs += abs(term)
        count += 1
    return total, total_abs, count


def _tensor_level_sum(f: PointFunction, d: int, level: int, bits: int,
                      executor: ThreadPoolExecutor) -> Tuple[mpf, mpf, int]:
    """第 level 层新增的张量节点：至少一个坐标取自本层"""
    rule = get_rule(FINITE, bits)
    old = [node for lv in range(level) for node in rule.nodes(lv)]
    new = rule.nodes(level)
    every = old + new
    total = mpf(0)
    total_abs = mpf(0)
    count = 0
    for k in range(d):
        axes = [old] * k + [new] + [every] * (d - k - 1)
        if not all(axes):
            continue
        # 按第一个坐标分块，结果按提交顺序累加
        rows = executor.map(lambda first: _tensor_row(f, first, axes[1:]), axes[0])
        for s, s_abs, n in rows:
            total += s
            total_abs += s_abs
            count += n
    return total, total_abs, count


def _tensor_size(d: int, level: int, bits: int) -> int:
    rule = get_rule(FINITE, bits)
    per_axis = sum(len(rule.nodes(lv)) for lv in range(level + 1))
    return per_axis ** d


def integrate_tensor(f: PointFunction, d: int, prec: Precision, max_levels: Optional[int] = None,
                     workers: Optional[int] = None, label: str = "张量积分") -> QuadratureResult:
    """
    单纯形上的张量双指数求积

    参数:
        f: (a, 1-Σa, 1) -> 被积函数值
        d: 维数（>= 2）
        prec: 精度
        max_levels: 最大层数
        workers: 线程数

    异常:
        PrecisionError: 层数或求值次数用尽仍未收敛，partial 为最后一层的结果
    """
    config = get_config()
    max_levels = max(max_levels or config.max_levels, MIN_LEVELS)
    bits = prec.bits
    tol = prec.tolerance
    # 线程共享 mpmath 的全局精度，这里统一设置后不再改动
    with mp.workprec(bits), ThreadPoolExecutor(max_workers=workers or config.workers) as executor:
        total = mpf(0)
        total_abs = mpf(0)
        count = 0
        prev = None
        diff = None
        estimate = mpf(0)
        levels = 0
        for level in range(max_levels):
            if level >= MIN_LEVELS and _tensor_size(d, level, bits) > TENSOR_NODE_BUDGET:
                logger.warning(f"{label}: 第 {level} 层超出求值预算 {TENSOR_NODE_BUDGET}")
                break
            s, s_abs, n = _tensor_level_sum(f, d, level, bits, executor)
            total += s
            total_abs += s_abs
            count += n
            levels = level + 1
            h = mpf(2) ** (-level * d)
            estimate = h * total
            roundoff = h * total_abs * (count + 1) * mpf(2) ** (-bits)
            if prev is not None:
                diff = abs(estimate - prev)
                logger.debug(f"{label} 第 {level} 层: {mpmath.nstr(estimate, 15)}，层差 {mpmath.nstr(diff, 3)}，"
                             f"{count} 个节点")
                if levels >= MIN_LEVELS and diff + roundoff <= tol:
                    return QuadratureResult.build(estimate, diff + roundoff, bits, levels, count)
            prev = estimate
        error = (diff if diff is not None else abs(estimate)) + total_abs * mpf(2) ** (-bits)
        partial = QuadratureResult.build(estimate, error, bits, levels, count)
    raise PrecisionError(f"{label} 在 {levels} 层内未收敛（误差估计 {mpmath.nstr(error, 3)}）", partial=partial)


def _smooth(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """s = t²(3-2t)，返回 (s, 1-s, ds/dt)，把端点奇异性压平"""
    s = t * t * (3 - 2 * t)
    sc = (1 - t) * (1 - t) * (1 + 2 * t)
    return s, sc, 6 * t * (1 - t)


def _qmc_block(f: PointFunction, d: int, log2_samples: int, seed: np.random.SeedSequence) -> float:
    sampler = qmc.Sobol(d=d, scramble=True, seed=np.random.default_rng(seed))
    points = sampler.random_base2(m=log2_samples)
    tiny = np.finfo(float).eps
    points = np.clip(points, tiny, 1 - tiny)
    s, sc, ds = _smooth(points)
    one = np.ones(points.shape[0])
    a, r, jac = _stick_breaking([(s[:, i], sc[:, i]) for i in range(d)], one)
    values = f(a, r, one) * jac * np.prod(ds, axis=1)
    return float(np.mean(values))


def integrate_qmc(f: PointFunction, d: int, log2_samples: Optional[int] = None,
                  randomizations: int = DEFAULT_RANDOMIZATIONS, seed: int = 0,
                  workers: Optional[int] = None) -> Tuple[QuadratureResult, int]:
    """
    随机化 Sobol 拟蒙特卡洛

    各随机化独立加扰，误差条为 3 倍标准误；同一 seed 结果逐位相同。

    返回:
        (结果, 求值次数)

    异常:
        DomainError: 随机化次数少于 2
    """
    if randomizations < MIN_RANDOMIZATIONS:
        raise DomainError(f"至少需要 {MIN_RANDOMIZATIONS} 次随机化，收到: {randomizations}")
    config = get_config()
    log2_samples = log2_samples or config.qmc_log2_samples
    seeds = np.random.SeedSequence(seed).spawn(randomizations)
    with ThreadPoolExecutor(max_workers=workers or config.workers) as executor:
        means = list(executor.map(lambda sq: _qmc_block(f, d, log2_samples, sq), seeds))
    estimate = float(np.mean(means))
    stderr = float(np.std(means, ddof=1)) / np.sqrt(randomizations)
    evaluations = randomizations * 2 ** log2_samples
    logger.info(f"QMC {d} 维，{evaluations} 个点: {estimate:.10g} ± {_QMC_SIGMAS * stderr:.3g}")
    with mp.workprec(_QMC_BITS):
        result = QuadratureResult.build(mpf(estimate), mpf(_QMC_SIGMAS * stderr), _QMC_BITS, 0, evaluations)
    return result, evaluations


def evaluate_period(spec: PeriodSpec, prec: Optional[Precision] = None, mode: str = AUTO,
                    max_levels: Optional[int] = None, log2_samples: Optional[int] = None,
                    randomizations: int = DEFAULT_RANDOMIZATIONS, seed: int = 0,
                    workers: Optional[int] = None) -> PeriodResult:
    """
    求周期积分的数值

    参数:
        spec: 周期表示
        prec: 确定性求积的精度，默认取配置
        mode: auto（维数 <= 3 用张量求积，否则 QMC）、deterministic 或 qmc
        log2_samples: 每次随机化的 Sobol 点数的对数
        randomizations: 随机化次数（>= 2）
        seed: QMC 随机种子

    返回:
        PeriodResult，moment_value 可直接与 ∫u^p·K₀ⁿ（或 ∫u·I₀·K₀ⁿ）比较

    异常:
        DomainError: 未知模式
        PrecisionError: 确定性求积未收敛，partial 为当前最好的结果
    """
    if mode not in MODES:
        raise DomainError(f"未知的求值模式: {mode}（支持: {', '.join(MODES)}）")
    d = spec.dimension
    if mode == AUTO:
        mode = DETERMINISTIC if d <= MAX_TENSOR_DIMENSION else QMC
    f = _point_function(spec)
    if mode == QMC:
        integral, evaluations = integrate_qmc(f, d, log2_samples, randomizations, seed, workers)
        return PeriodResult(spec, integral, QMC, False, evaluations)

    prec = prec or Precision(get_config().default_digits, get_config().guard_digits)
    if d == 1:
        one = mpf(1)
        integral = integrate_unit_interval(lambda x, xc: f([x], xc, one), prec, max_levels, label=spec.label)
    else:
        integral = integrate_tensor(f, d, prec, max_levels, workers, label=spec.label)
    logger.info(f"{spec.label}: {integral.value.to_decimal(min(20, prec.target_digits))}")
    return PeriodResult(spec, integral, DETERMINISTIC, True, integral.nodes)


def cross_validate(spec: PeriodSpec, prec: Optional[Precision] = None, **options) -> PeriodCheck:
    """周期表示换算后与直接求积的 Bessel 矩比较"""
    period = evaluate_period(spec, prec, **options)
    prec = prec or Precision(get_config().default_digits, get_config().guard_digits)
    direct = moment(spec.product, prec)
    difference = period.moment_value.value - direct.value
    if not difference.contains(0):
        logger.warning(f"{spec.label}: 与直接求积相差 {mpmath.nstr(difference.value, 3)}")
    return PeriodCheck(period, direct, difference)


def verify_appendixA_identity(prec: Precision, max_levels: Optional[int] = None) -> BigReal:
    """
    ∫₀¹[(1/x)L² - 4((1-x²)/x)((1+x²)/(2x)·L - 1)²]dx = 3，L = log((1+x)/(1-x))

    返回:
        |积分 - 3|（半径为求积误差）
    """
    result = integrate_unit_interval(appendix_identity_point, prec, max_levels, label="对数平方恒等式")
    residual = abs(result.value - 3)
    logger.info(f"对数平方恒等式残差: {mpmath.nstr(residual.value, 3)}")
    return residual
