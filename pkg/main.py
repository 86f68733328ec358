"""
Bessel 矩实验室命令行工具
高精度求积、精确矩代数、连分数、PSLQ 与周期积分，报告输出为 JSON / CSV / 纯文本
"""

import sys
import logging
import argparse
from pathlib import Path
from typing import Callable, Dict, List, Optional

import reports
from core.cache import ResultCache
from core.config import LabConfig, get_config, set_config
from core.errors import DomainError, LabError, VerificationError
from format_manager import get_format_manager
from periods import FORMS, MODES, RAW_SIMPLEX
from quadrature import BesselProduct, moment_product

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """参数错误时抛出异常而不是直接退出，由 run() 统一处理"""

    def error(self, message):
        raise _UsageError(f"{message}\n\n{self.format_usage()}")


def _split(text: Optional[str]) -> Optional[List[str]]:
    if not text:
        return None
    return [item.strip() for item in text.split(",") if item.strip()]


def _ints(text: str) -> List[int]:
    try:
        return [int(item) for item in _split(text) or []]
    except ValueError:
        raise DomainError(f"需要逗号分隔的整数，收到: {text}")


def build_parser() -> argparse.ArgumentParser:
    """构造命令行语法"""
    parser = _ArgumentParser(prog="main.py", description="Bessel 矩实验室")
    parser.add_argument("--format", default="json", help="输出格式: " + ", ".join(get_format_manager().names()))
    parser.add_argument("--digits", type=int, help="十进制精度（>= 15，默认取 BESSEL_LAB_DIGITS）")
    parser.add_argument("--cache-dir", help="结果缓存目录")
    parser.add_argument("--no-cache", action="store_true", help="不读写缓存")
    parser.add_argument("--output", "-o", help="把报告写入文件而不是标准输出")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v 输出 INFO 日志，-vv 输出 DEBUG")
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    p = sub.add_parser("moment", help="∫u^p·K₀^a·K₁^b·I₀^c·I₁^d 的高精度值")
    p.add_argument("--product", help="p,a,b,c,d")
    p.add_argument("--kappa", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--j", type=int)

    p = sub.add_parser("decompose", help="I_{n,j}^{(κ)} 在基底上的精确分解")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)

    cf = sub.add_parser("cf", help="连分数编目")
    cf_sub = cf.add_subparsers(dest="cf_command", parser_class=_ArgumentParser)
    cf_sub.add_parser("list", help="导出编目")
    p = cf_sub.add_parser("eval", help="按深度求值并与目标比较")
    p.add_argument("name")
    p.add_argument("--depth", type=int)
    p = cf_sub.add_parser("convergents", help="两组初值下的渐近分数")
    p.add_argument("name")
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--p-init", help="p 序列初值，如 0,6")
    p.add_argument("--q-init", help="q 序列初值，如 1,5")
    p.add_argument("--normalize", action="store_true")
    p = cf_sub.add_parser("chain", help="由矩分解构造 z 链")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--tail", help="尾部剖面的 k 值，逗号分隔")
    p = cf_sub.add_parser("roots", help="特征多项式的极限根")
    p.add_argument("name")
    p.add_argument("--k-max", type=int, default=200)
    p = cf_sub.add_parser("exponent", help="有理逼近的经验收敛指数")
    p.add_argument("name")
    p.add_argument("--k-max", type=int, default=40)
    p.add_argument("--target", help="极限值表达式，默认取编目目标")
    p.add_argument("--p-init")
    p.add_argument("--q-init")

    p = sub.add_parser("pslq", help="整数关系检测")
    p.add_argument("values", nargs="+", help="常数表达式，如 zeta(3) 'moment(1,4,0,0,0)' 1")
    p.add_argument("--labels", help="逗号分隔的标签")
    p.add_argument("--max-coeff", type=int, default=10 ** 6)
    p.add_argument("--confidence", type=int, help="置信位数")

    p = sub.add_parser("verify", help="运行检验组")
    p.add_argument("--suite", default="all", choices=reports.VERIFY_SUITES)

    p = sub.add_parser("period", help="周期积分表示")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--form", default=RAW_SIMPLEX, choices=FORMS)
    p.add_argument("--mode", default="auto", choices=MODES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log2-samples", type=int)
    p.add_argument("--randomizations", type=int, default=8)
    p.add_argument("--compare", action="store_true", help="与直接 Bessel 求积比较")

    p = sub.add_parser("limits", help="大 n 极限")
    p.add_argument("--n-values", default="2,4,8,16")

    p = sub.add_parser("serve", help="启动 Web 服务")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _moment(args, digits, cache) -> reports.Report:
    if args.product:
        product = BesselProduct.parse(args.product)
    elif None not in (args.kappa, args.n, args.j):
        product = moment_product(args.kappa, args.n, args.j)
    else:
        raise DomainError("moment 需要 --product 或 --kappa/--n/--j")
    return reports.moment_report(product, digits, cache)


def _cf(args, digits, cache) -> reports.Report:
    command = args.cf_command
    if command == "list":
        return reports.cf_list_report()
    if command == "eval":
        return reports.cf_eval_report(args.name, digits, args.depth, cache)
    if command == "convergents":
        return reports.cf_convergents_report(args.name, args.k_max, _split(args.p_init), _split(args.q_init),
                                              args.normalize, digits)
    if command == "chain":
        return reports.cf_chain_report(args.kappa, digits, _ints(args.tail) if args.tail else None, cache)
    if command == "roots":
        return reports.cf_roots_report(args.name, args.k_max)
    if command == "exponent":
        return reports.cf_exponent_report(args.name, args.k_max, args.target, digits,
                                          _split(args.p_init), _split(args.q_init))
    raise _UsageError("cf 需要子命令: list, eval, convergents, chain, roots, exponent")


_HANDLERS: Dict[str, Callable] = {
    "moment": _moment,
    "decompose": lambda args, digits, cache: reports.decompose_report(args.kappa, args.n, args.j),
    "cf": _cf,
    "pslq": lambda args, digits, cache: reports.pslq_report(args.values, digits, _split(args.labels),
                                                            args.max_coeff, args.confidence),
    "verify": lambda args, digits, cache: reports.verify_report(args.suite, digits, cache),
    "period": lambda args, digits, cache: reports.period_report(args.n, args.p, args.form, digits, args.mode,
                                                                args.compare, args.log2_samples, args.seed,
                                                                args.randomizations, cache),
    "limits": lambda args, digits, cache: reports.limits_report(_ints(args.n_values), digits, cache),
}


def _title(args) -> str:
    if args.command == "cf" and args.cf_command:
        return f"cf {args.cf_command}"
    return args.command


def _configure(args) -> None:
    cache_dir = Path(args.cache_dir) if args.cache_dir else None
    config = LabConfig.from_env().override(cache_dir=cache_dir, default_digits=args.digits)
    set_config(config)
    level = config.log_level
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose >= 2:
        level = "DEBUG"
    logging.basicConfig(level=getattr(logging, level), stream=sys.stderr, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _serve(args) -> int:
    import uvicorn
    uvicorn.run("web_app:app", host=args.host, port=args.port)
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    """
    执行一条命令

    参数:
        argv: 命令行参数（不含程序名），默认取 sys.argv[1:]

    返回:
        退出码：0 成功，1 检验失败或计算失败，2 用法或参数错误
    """
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
        if not args.command:
            raise _UsageError(parser.format_help())
        _configure(args)
        if args.command == "serve":
            return _serve(args)
        manager = get_format_manager()
        if not manager.is_format_supported(args.format):
            raise DomainError(f"不支持的格式: {args.format}。支持的格式: {', '.join(manager.names())}")
        config = get_config()
        digits = config.default_digits
        reports.precision_for(digits)
        cache = ResultCache(config.cache_dir, enabled=not args.no_cache)

        report = _HANDLERS[args.command](args, digits, cache)
        title = _title(args)
        if args.output:
            manager.export(args.format, title, report, args.output)
        else:
            sys.stdout.write(manager.render(args.format, title, report))
        if report.get("passed") is False:
            print(f"[错误] {title} 检验未通过", file=sys.stderr)
            return EXIT_FAILED
        return EXIT_OK
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    except _UsageError as e:
        print(f"[错误] {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as e:
        print(f"[错误] 检验失败: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (DomainError, NotImplementedError) as e:
        print(f"[错误] {e}", file=sys.stderr)
        return EXIT_USAGE
    except LabError as e:
        print(f"[错误] 计算失败: {e}", file=sys.stderr)
        return EXIT_FAILED


def main():
    """主函数"""
    sys.exit(run())


if __name__ == "__main__":
    main()
