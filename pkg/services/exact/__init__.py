"""
精确算术模块

提供整个引擎的系数域：
- ExactScalar: 有理数 × i^a × π^b × 对数符号单项式
- FormalSeries: 按 (ħ, g) 双分次截断的形式级数
"""

from .scalar import Atom, ExactScalar, scalar_sum, to_decimal
from .series import DEFAULT_TRUNCATION, FormalSeries, series_exp, series_log, series_mul

__all__ = [
    'Atom', 'ExactScalar', 'scalar_sum', 'to_decimal',
    'DEFAULT_TRUNCATION', 'FormalSeries', 'series_exp', 'series_log', 'series_mul',
]
