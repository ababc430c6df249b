"""
修正 Bessel 函数模块
基于升幂级数的 I_ν 与 K_ν，供 Hadamard 函数求值使用

主要功能：
1. 带收敛预算的级数求和
2. I_ν 升幂级数（含负阶，借助倒数 Γ 函数）
3. 非整数阶 K_ν = π(I_{−ν} − I_ν)/(2 sin νπ)
4. 整数阶 K_n 的对数极限级数

作者: Assistant
创建时间: 2024年
"""

import logging
from typing import Callable

import mpmath

from services.common.errors import SeriesConvergenceError

logger = logging.getLogger("pqft.kernels.bessel")

MAX_TERMS = 600


def sum_series(term: Callable[[int], mpmath.mpf], start: int = 0,
               max_terms: int = MAX_TERMS) -> mpmath.mpf:
    """
    对 term(k) 求和直到相对增量低于工作精度

    Raises:
        SeriesConvergenceError: 超出项数预算
    """
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
    total = mpmath.mpf(0)
    small_run = 0
    for k in range(start, start + max_terms):
        value = term(k)
        total += value
        if abs(value) <= eps * max(abs(total), eps):
            small_run += 1
            # 连续两项足够小才停止，避免偶数项恰好为零
            if small_run >= 2:
                return total
        else:
            small_run = 0
    raise SeriesConvergenceError(max_terms, mpmath.nstr(term(start + max_terms), 5))


def bessel_i(nu, y) -> mpmath.mpf:
    """I_ν(y) 的升幂级数"""
    nu = mpmath.mpf(nu)
    if nu < 0 and nu == int(nu):
        nu = -nu  # I_{−n} = I_n
    y = mpmath.mpf(y)
    half = y / 2
    return sum_series(lambda k: half ** (2 * k + nu) * mpmath.rgamma(k + nu + 1) / mpmath.factorial(k))


def bessel_k(nu, y) -> mpmath.mpf:
    """
    K_ν(y)，y > 0

    非整数阶用 I_{−ν} 与 I_ν 的组合，整数阶用带对数的极限级数
    """
    nu = mpmath.mpf(nu)
    if nu == int(nu):
        return bessel_k_integer(abs(int(nu)), y)
    return mpmath.pi * (bessel_i(-nu, y) - bessel_i(nu, y)) / (2 * mpmath.sin(nu * mpmath.pi))


def bessel_k_integer(n: int, y) -> mpmath.mpf:
    """整数阶 K_n 的标准对数级数"""
    y = mpmath.mpf(y)
    half = y / 2
    quarter = y * y / 4
    head = mpmath.mpf(0)
    for k in range(n):
        head += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * (-quarter) ** k
    head = head * half ** (-n) / 2
    log_part = (-1) ** (n + 1) * mpmath.log(half) * bessel_i(n, y)
    tail = sum_series(lambda k: (mpmath.digamma(k + 1) + mpmath.digamma(n + k + 1))
                      * quarter ** k / (mpmath.factorial(k) * mpmath.factorial(n + k)))
    return head + log_part + (-1) ** n * half ** n * tail / 2
