"""
报告构建模块
命令行与 Web 接口共用：每个函数完成一次计算并返回可直接格式化的报告 dict（数值一律为十进制字符串）
"""

import math
import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import mpmath
from mpmath import mp, mpf

from core.cache import ResultCache
from core.config import get_config
from core.errors import DomainError
from core.numbers import BigReal, Precision
from core.parser import parse_values
from quadrature import BesselProduct, closed_form_table, find_closed_form, large_n_limits, moment
from momentalg import MomentIndex, decompose
from contfrac import (APERY_VARIANTS, KAPPA4_RESCALING, HolonomicRecurrence, catalog, cf_value, chain_tail_profile,
                     characteristic_roots, convergence_exponent, convergents, derive_recurrence, get_entry,
                     higher_order_recurrence, replay_residuals, rescale_recurrence, z_chain_from_moments)
from contfrac.catalog import PROVED, SCHEMA_VERSION
from relations import IntegerRelation, RelationProblem, get_identity_manager, pslq, verify_catalog_identities
from periods import MAX_TENSOR_DIMENSION, QMC, PeriodSpec, cross_validate, evaluate_period, verify_appendixA_identity

logger = logging.getLogger(__name__)

Report = Dict[str, Any]

VERIFY_SUITES = ("identities", "recurrences", "appendixA", "all")
HIGHER_ORDER_KAPPAS = (4, 5)
_QMC_SHOWN_DIGITS = 12


def precision_for(digits: int) -> Precision:
    """
    异常:
        DomainError: digits < 15
    """
    if digits < 15:
        raise DomainError(f"精度至少 15 位，收到: {digits}")
    return Precision(digits, get_config().guard_digits)


def _below(digits: int) -> str:
    return f"<1e-{digits}"


def _residual_text(residual: BigReal, digits: int) -> str:
    """残差在 10^-digits 内时输出 <1e-digits，否则输出 3 位有效数字"""
    with mp.workprec(residual.prec_bits):
        if abs(residual.value) < mpf(10) ** (-digits):
            return _below(digits)
        return mpmath.nstr(residual.value, 3)


def _agree_digits(difference: BigReal, cap: int) -> int:
    with mp.workprec(difference.prec_bits):
        if not difference.value:
            return cap
        return max(0, min(cap, int(-mpmath.log10(abs(difference.value)))))


def _cached(cache: Optional[ResultCache], command: str, params: Dict[str, Any], digits: int,
            build: Callable[[], Report]) -> Report:
    """按 (命令, 参数, 精度) 读取或生成报告"""
    params = dict(params, guard_digits=get_config().guard_digits)
    report = cache.load_report(command, params, digits) if cache else None
    if report is None:
        report = build()
        if cache:
            cache.store_report(command, params, digits, report)
    return report


def moment_report(product: BesselProduct, digits: int, cache: Optional[ResultCache] = None) -> Report:
    """∫u^p·K₀^a·K₁^b·I₀^c·I₁^d 的数值、闭式（若有）与残差"""
    prec = precision_for(digits)
    params = {"product": [product.p, product.a, product.b, product.c, product.d]}
    value = cache.load("moment", params, digits) if cache else None
    if value is None:
        value = moment(product, prec).value
        if cache:
            cache.store("moment", params, digits, value)
    report: Report = {"integrand": str(product), "digits": digits, "value": value.to_decimal(digits)}
    target = find_closed_form(product)
    if target is not None:
        report["closed_form"] = str(target)
        report["residual"] = _residual_text(value - target.evaluate(prec), digits - 2)
    return report


def decompose_report(kappa: int, n: int, j: int) -> Report:
    idx = MomentIndex(kappa, n, j)
    report: Report = {"index": str(idx), "n": n, "j": j}
    report.update(decompose(idx).as_dict())
    return report


def cf_list_report() -> Report:
    return {"schema_version": SCHEMA_VERSION, "count": len(catalog()),
            "rows": [spec.to_dict() for spec in catalog()]}


def cf_eval_report(name: str, digits: int, depth: Optional[int] = None,
                   cache: Optional[ResultCache] = None) -> Report:
    spec = get_entry(name)
    precision_for(digits)
    depth = depth or get_config().cf_depth
    return _cached(cache, "cf_eval", {"name": name, "depth": depth}, digits,
                   lambda: _cf_eval(spec, digits, depth))


def _cf_eval(spec, digits: int, depth: int) -> Report:
    prec = precision_for(digits)
    value = cf_value(spec, depth, prec)
    target = spec.target.evaluate(prec)
    difference = value - target
    return {
        "name": spec.name,
        "provenance": spec.provenance,
        "depth": depth,
        "digits": digits,
        "value": value.to_decimal(digits),
        "target": str(spec.target),
        "target_value": target.to_decimal(digits),
        "agree_digits": _agree_digits(difference, digits),
    }


def _pair(values: Optional[Sequence[str]], default) -> tuple:
    if not values:
        return default
    if len(values) != 2:
        raise DomainError(f"初值需要两个数，收到: {list(values)}")
    return tuple(Fraction(v) for v in values)


def cf_convergents_report(name: str, k_max: int, numerator_init: Optional[Sequence[str]] = None,
                          denominator_init: Optional[Sequence[str]] = None, normalize: bool = False,
                          digits: int = 30) -> Report:
    spec = get_entry(name)
    p_init = _pair(numerator_init, (1, 0))
    q_init = _pair(denominator_init, (0, 1))
    seq = convergents(spec.recurrence(), k_max, p_init, q_init, normalize)
    rows = []
    with mp.workprec(precision_for(max(digits, 15)).bits):
        for k in range(seq.start, seq.k_max + 1):
            p, q = seq.pair(k)
            ratio = None
            if q:
                r = p / q
                ratio = mpmath.nstr(mpf(r.numerator) / r.denominator, digits)
            rows.append({"k": k, "p": str(p), "q": str(q), "ratio": ratio})
    return {"name": spec.name, "p_init": [str(x) for x in p_init], "q_init": [str(x) for x in q_init],
            "normalized": normalize, "rows": rows}


def cf_chain_report(kappa: int, digits: int, tail: Optional[Sequence[int]] = None,
                    cache: Optional[ResultCache] = None) -> Report:
    precision_for(digits)
    params = {"kappa": kappa, "tail": list(tail) if tail else None}
    return _cached(cache, "cf_chain", params, digits, lambda: _cf_chain(kappa, digits, tail))


def _cf_chain(kappa: int, digits: int, tail: Optional[Sequence[int]]) -> Report:
    prec = precision_for(digits)
    result = z_chain_from_moments(kappa, prec)
    report: Report = {
        "kappa": kappa,
        "start_k": result.start_k,
        "z_start": str(result.z_start),
        "z0": str(result.z0),
        "expected": str(result.expected),
        "matches": result.matches,
        "value": result.value.to_decimal(digits),
        "basis_value": result.basis_value.to_decimal(digits),
    }
    if tail:
        profile = chain_tail_profile(kappa, tail, prec)
        report["tail"] = {"k_values": profile.k_values, "ratios": [f"{r:.12g}" for r in profile.ratios],
                          "extrapolated": f"{profile.extrapolated:.6g}", "expected": profile.expected}
    return report


def cf_roots_report(name: str, k_max: int = 200) -> Report:
    roots = characteristic_roots(get_entry(name).recurrence(), k_max)
    return {
        "name": name,
        "b": str(roots.b),
        "a": str(roots.a),
        "degree": roots.degree,
        "roots": [f"{r:.12g}" for r in roots.roots],
        "empirical": f"{roots.empirical:.6g}" if roots.empirical is not None else None,
    }


def cf_exponent_report(name: str, k_max: int, target_text: Optional[str], digits: int,
                       numerator_init: Optional[Sequence[str]] = None,
                       denominator_init: Optional[Sequence[str]] = None) -> Report:
    spec = get_entry(name)
    prec = precision_for(digits)
    target_expr = parse_values([target_text])[0][1] if target_text else spec.target
    fit = convergence_exponent(spec.recurrence(), target_expr.evaluate(prec), k_max,
                               _pair(numerator_init, (1, 0)), _pair(denominator_init, (0, 1)), prec)
    return {
        "name": name,
        "target": str(target_expr),
        "k_max": k_max,
        "slope": f"{fit.slope:.6g}" if fit.slope is not None else None,
        "residual": f"{fit.residual:.3g}" if fit.residual is not None else None,
        "points": fit.points,
        "fast_enough": fit.fast_enough,
        "degenerate": fit.degenerate,
    }


def pslq_report(values: Sequence[str], digits: int, labels: Optional[Sequence[str]] = None,
                max_coeff: int = 10 ** 6, confidence_digits: Optional[int] = None) -> Report:
    """
    对命令行常数运行 PSLQ

    异常:
        DomainError: 表达式无法解析或参数不合法
        PrecisionError: 精度不足以支持置信位数
    """
    prec = precision_for(digits)
    parsed = parse_values(values)
    labels = list(labels) if labels else [label for label, _ in parsed]
    confidence = confidence_digits or max(10, digits - 20)
    numbers = [expr.evaluate(prec) for _, expr in parsed]
    problem = RelationProblem.of(numbers, labels, max_coeff, confidence)
    result = pslq(problem)
    report: Report = {"digits": digits, "confidence_digits": confidence, "max_coeff": str(max_coeff)}
    report.update(result.as_dict())
    if isinstance(result, IntegerRelation):
        report["relation"] = str(result)
    return report


def _identity_rows(prec: Precision) -> List[Dict[str, Any]]:
    report = verify_catalog_identities(prec, strict=False)
    return [{"suite": "identities", "check": c.name, "provenance": c.provenance,
             "residual": _residual_text(c.published_residual, c.confidence_digits),
             "recovered": " ".join(str(a) for a in c.recovered) if c.recovered else None,
             "passed": c.matched} for c in report.checks]


def _recurrence_rows(prec: Precision) -> List[Dict[str, Any]]:
    rows = []
    for kappa in HIGHER_ORDER_KAPPAS:
        report = higher_order_recurrence(kappa, prec)
        worst = max((c.residual for c in report.checks), key=lambda r: abs(r.value))
        rows.append({"suite": "recurrences", "check": f"higher_order_kappa{kappa}", "provenance": PROVED,
                     "residual": _residual_text(worst, int(-math.log10(report.tolerance))),
                     "passed": report.passed})
    rescaled = rescale_recurrence(derive_recurrence(4), KAPPA4_RESCALING)
    three_term = HolonomicRecurrence.from_three_term(get_entry("zeta3_kappa4").recurrence())
    rows.append({"suite": "recurrences", "check": "kappa4_rescaled_three_term", "provenance": PROVED,
                 "residual": "0", "passed": rescaled.is_equivalent(three_term)})
    for name in APERY_VARIANTS:
        residuals = replay_residuals(name, 50)
        rows.append({"suite": "recurrences", "check": f"closed_form_{name}", "provenance": PROVED,
                     "residual": str(max(abs(r) for r in residuals)), "passed": all(r == 0 for r in residuals)})
    return rows


def _appendix_rows(prec: Precision) -> List[Dict[str, Any]]:
    tolerance_digits = prec.target_digits - 5
    rows = []
    for entry in closed_form_table():
        residual = moment(entry.integrand, prec).value - entry.target.evaluate(prec)
        rows.append({"suite": "appendixA", "check": entry.label, "provenance": PROVED,
                     "residual": _residual_text(residual, tolerance_digits),
                     "passed": bool(residual.contains(0, Fraction(1, 10 ** tolerance_digits)))})
    for name in ("kappa4_basis",):
        identity = get_identity_manager().get_identity(name)
        values = identity.evaluate(prec)
        residual = BigReal.exact(0, prec.bits)
        for v, a in zip(values, identity.published):
            residual = residual + v * a
        rows.append({"suite": "appendixA", "check": name, "provenance": identity.provenance,
                     "residual": _residual_text(residual, tolerance_digits),
                     "passed": bool(residual.contains(0, Fraction(1, 10 ** tolerance_digits)))})
    residual = verify_appendixA_identity(prec)
    rows.append({"suite": "appendixA", "check": "log_square_identity", "provenance": PROVED,
                 "residual": _residual_text(residual, tolerance_digits),
                 "passed": bool(residual.contains(0, Fraction(1, 10 ** tolerance_digits)))})
    return rows


def verify_report(suite: str, digits: int, cache: Optional[ResultCache] = None) -> Report:
    """
    运行一组检验

    参数:
        suite: identities、recurrences、appendixA 或 all

    返回:
        报告，passed 为 False 时命令行以 1 退出
    """
    if suite not in VERIFY_SUITES:
        raise DomainError(f"未知的检验组: {suite}（支持: {', '.join(VERIFY_SUITES)}）")
    precision_for(digits)
    return _cached(cache, "verify", {"suite": suite}, digits, lambda: _verify(suite, digits))


def _verify(suite: str, digits: int) -> Report:
    prec = precision_for(digits)
    rows: List[Dict[str, Any]] = []
    if suite in ("appendixA", "all"):
        rows += _appendix_rows(prec)
    if suite in ("recurrences", "all"):
        rows += _recurrence_rows(prec)
    if suite in ("identities", "all"):
        rows += _identity_rows(prec)
    passed = all(row["passed"] for row in rows)
    logger.info(f"检验组 {suite}: {sum(r['passed'] for r in rows)}/{len(rows)} 通过")
    return {"suite": suite, "digits": digits, "passed": passed, "rows": rows}


def period_report(n: int, p: int, form: str, digits: int, mode: str = "auto", compare: bool = False,
                  log2_samples: Optional[int] = None, seed: int = 0, randomizations: int = 8,
                  cache: Optional[ResultCache] = None) -> Report:
    spec = PeriodSpec(n, p, form)
    precision_for(digits)
    params = {"n": n, "p": p, "form": form, "mode": mode, "compare": compare, "log2_samples": log2_samples,
              "seed": seed, "randomizations": randomizations}
    return _cached(cache, "period", params, digits,
                   lambda: _period(spec, digits, mode, compare, log2_samples, seed, randomizations))


def _period(spec: PeriodSpec, digits: int, mode: str, compare: bool, log2_samples: Optional[int], seed: int,
            randomizations: int) -> Report:
    prec = precision_for(digits)
    options = dict(mode=mode, log2_samples=log2_samples, seed=seed, randomizations=randomizations,
                   workers=get_config().workers)
    # QMC 结果最多输出 12 位
    sampled = mode == QMC or (mode == "auto" and spec.dimension > MAX_TENSOR_DIMENSION)
    shown = min(digits, _QMC_SHOWN_DIGITS) if sampled else digits
    if compare:
        report = cross_validate(spec, prec, **options).as_dict(shown)
    else:
        report = evaluate_period(spec, prec, **options).as_dict(shown)
    report["seed"] = seed
    return report


def limits_report(n_values: Sequence[int], digits: int, cache: Optional[ResultCache] = None) -> Report:
    precision_for(digits)
    return _cached(cache, "limits", {"n_values": list(n_values)}, digits, lambda: _limits(n_values, digits))


def _limits(n_values: Sequence[int], digits: int) -> Report:
    prec = precision_for(digits)
    result = large_n_limits(n_values, prec)
    shown = min(digits, 20)
    rows = [{"n": n, "moment_ratio": m.to_decimal(shown), "k0_ratio": k.to_decimal(shown)}
            for n, m, k in zip(result.n_values, result.moment_ratios, result.k0_ratios)]
    return {
        "digits": digits,
        "moment_limit": result.moment_limit.to_decimal(shown),
        "k0_limit": result.k0_limit.to_decimal(shown),
        "moment_monotone": result.moment_monotone,
        "k0_monotone": result.k0_monotone,
        "rows": rows,
    }
