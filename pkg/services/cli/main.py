"""
命令行入口
解析参数、合并配置文件、运行子命令并写出报告

退出码：0 全部检查通过；1 回归不一致或检查失败；2 参数、配置或模型名错误
"""

import argparse
import logging
import sys
from typing import List, Optional

from core.config import (
    OUTPUT_FORMATS, debug_config, get_config, load_config_file, reset_config, update_config,
)
from services.common.errors import ConfigError, PqftError, UnknownModelError
from services.models import get_available_models
from .commands import CHECK_SUITES, cmd_beta, cmd_check, cmd_extend, cmd_flow, cmd_hadamard
from .output import CommandResult, write_result

logger = logging.getLogger("pqft.cli")

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(funcName)s:%(lineno)d] - %(message)s'

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose or debug_config["enabled"] else logging.INFO
    logging.basicConfig(format=LOG_FORMAT, level=level)


def _float_list(text: str) -> List[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _int_list(text: str) -> List[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    # 通用选项既可写在子命令前也可写在其后
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key=value 配置文件，命令行参数优先")
    common.add_argument("--output-dir", dest="output_dir", help="输出目录，默认 PQFT_OUTPUT_DIR 或 output")
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, help="输出格式")
    common.add_argument("--workers", type=int, help="并行线程数")
    common.add_argument("--tol", dest="tolerance", type=float, help="数值容差")
    common.add_argument("--verbose", "-v", action="store_true", help="DEBUG 日志")

    parser = argparse.ArgumentParser(prog="pqft-rg", description="微扰代数量子场论的重整化群计算",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    beta = sub.add_parser("beta", help="运行模型流水线", parents=[common])
    beta.add_argument("model", help=f"模型名: {', '.join(get_available_models())}")

    ext = sub.add_parser("extend", help="纯幂核 (x²−iε)^{-power} 的延拓", parents=[common])
    ext.add_argument("--dim", type=int, required=True)
    ext.add_argument("--sig", type=int, help="号差 s，默认 d−1")
    ext.add_argument("--power", type=int, required=True)
    ext.add_argument("--oracle", action="store_true", help="附带欧氏数值检验（ω = 0）")

    check = sub.add_parser("check", help="检查套件", parents=[common])
    check.add_argument("suite", choices=CHECK_SUITES)
    check.add_argument("--order", type=int, help="流方程阶数或差分阶数")
    check.add_argument("--dim", dest="dims", type=_int_list, help="Hadamard 检查的维数，逗号分隔")

    flow = sub.add_parser("flow", help="φ² 模型的抵消项提取", parents=[common])
    flow.add_argument("--lambda-grid", dest="lambda_grid", type=_float_list, help="Λ 网格，逗号分隔")
    flow.add_argument("--families", type=lambda s: [x.strip() for x in s.split(",") if x.strip()])
    flow.add_argument("--sigma", type=float)
    flow.add_argument("--fit-tol", dest="fit_tolerance", type=float)

    had = sub.add_parser("hadamard", help="Hadamard 函数点求值", parents=[common])
    had.add_argument("--dim", type=int, required=True)
    had.add_argument("--m2", type=float, required=True)
    had.add_argument("--mu", type=float)
    had.add_argument("--x2", type=float, required=True)
    return parser


def _configure(args: argparse.Namespace):
    config = reset_config()
    if getattr(args, "config", None):
        update_config(**load_config_file(args.config))
    overrides = {key: getattr(args, key, None) for key in
                 ("output_dir", "output_format", "workers", "tolerance", "lambda_grid", "families",
                  "sigma", "fit_tolerance")}
    update_config(command=args.command, **overrides)
    if args.command == "beta":
        update_config(model=args.model)
    return config.validate()


def run(args: argparse.Namespace) -> CommandResult:
    config = _configure(args)
    if args.command == "beta":
        return cmd_beta(args.model, config)
    if args.command == "extend":
        return cmd_extend(args.dim, args.sig, args.power, args.oracle, config)
    if args.command == "check":
        return cmd_check(args.suite, config, args.order, args.dims)
    if args.command == "flow":
        return cmd_flow(config)
    if args.command == "hadamard":
        return cmd_hadamard(args.dim, args.m2, args.mu, args.x2, config)
    raise ValueError(f"不支持的命令: {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    setup_logging(getattr(args, "verbose", False))
    try:
        result = run(args)
    except (UnknownModelError, ConfigError) as e:
        logger.error(f"❌ {e.message}")
        print(e.message, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        logger.error(f"❌ {e}")
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except PqftError as e:
        logger.error(f"❌ {e.message}")
        print(e.message, file=sys.stderr)
        return EXIT_FAILED
    current = get_config()
    paths = write_result(args.command, result, current.output_dir, current.output_format, current.to_dict())
    if result.summary:
        print(result.summary)
    for path in paths:
        print(f"→ {path}")
    return result.exit_code


__all__ = ['build_parser', 'main', 'run', 'setup_logging', 'EXIT_OK', 'EXIT_FAILED', 'EXIT_USAGE']
