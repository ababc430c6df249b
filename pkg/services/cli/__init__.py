"""
命令行模块

- commands: beta / extend / check / flow / hadamard 子命令
- output: JSON 与 CSV 报告写出
- main: 参数解析与退出码
"""

from .commands import (
    CHECK_SUITES, cmd_beta, cmd_check, cmd_extend, cmd_flow, cmd_hadamard, suite_cocycle,
    suite_feynman, suite_flow, suite_hadamard, suite_products,
)
from .main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main, run, setup_logging
from .output import SCHEMA, CommandResult, dumps, envelope, write_csv, write_json, write_result

__all__ = [
    'CHECK_SUITES', 'cmd_beta', 'cmd_check', 'cmd_extend', 'cmd_flow', 'cmd_hadamard',
    'suite_cocycle', 'suite_feynman', 'suite_flow', 'suite_hadamard', 'suite_products',
    'EXIT_FAILED', 'EXIT_OK', 'EXIT_USAGE', 'build_parser', 'main', 'run', 'setup_logging',
    'SCHEMA', 'CommandResult', 'dumps', 'envelope', 'write_csv', 'write_json', 'write_result',
]
