"""
形式幂级数模块
实现按 (ħ 阶, 耦合阶) 双分次的截断形式级数

主要功能：
1. 截断的加法与 Cauchy 乘积（可注入系数乘法）
2. 常数项受约束的 exp / log
3. ħ 平移与系数映射

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

from services.common.errors import ConstantTermError, TruncationMismatchError
from .scalar import ExactScalar

logger = logging.getLogger("pqft.exact.series")

Bidegree = Tuple[int, int]
Product = Callable[[Any, Any], Any]

DEFAULT_TRUNCATION: Bidegree = (4, 4)


def _is_zero(value: Any) -> bool:
    checker = getattr(value, "is_zero", None)
    if callable(checker):
        return checker()
    return value == 0


def _default_product(left: Any, right: Any) -> Any:
    return left * right


class FormalSeries:
    """
    截断双分次形式级数

    coeffs 的键是 (h, g)，超出截断的项在构造时丢弃，缺省项即为零。
    """

    def __init__(self, coeffs: Optional[Dict[Bidegree, Any]] = None,
                 truncation: Bidegree = DEFAULT_TRUNCATION):
        self.truncation: Bidegree = tuple(truncation)
        h_max, g_max = self.truncation
        self._coeffs: Dict[Bidegree, Any] = {}
        for (h, g), value in (coeffs or {}).items():
            if h < 0 or g < 0:
                raise ValueError(f"双分次必须非负: {(h, g)}")
            if h > h_max or g > g_max or _is_zero(value):
                continue
            self._coeffs[(h, g)] = value

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    @classmethod
    def monomial(cls, value: Any, h: int = 0, g: int = 0,
                 truncation: Bidegree = DEFAULT_TRUNCATION) -> "FormalSeries":
        return cls({(h, g): value}, truncation)

    @classmethod
    def constant(cls, value: Any = None,
                 truncation: Bidegree = DEFAULT_TRUNCATION) -> "FormalSeries":
        return cls({(0, 0): ExactScalar.one() if value is None else value}, truncation)

    # ------------------------------------------------------------------
    # 访问
    # ------------------------------------------------------------------

    def coefficient(self, h: int, g: int, default: Any = None) -> Any:
        if default is None:
            default = ExactScalar.zero()
        return self._coeffs.get((h, g), default)

    def items(self) -> Iterator[Tuple[Bidegree, Any]]:
        return iter(sorted(self._coeffs.items(), key=lambda item: item[0]))

    def bidegrees(self):
        return sorted(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def constant_term(self) -> Any:
        return self._coeffs.get((0, 0))

    def min_hbar(self) -> Optional[int]:
        return min((h for h, _ in self._coeffs), default=None)

    def __len__(self) -> int:
        return len(self._coeffs)

    # ------------------------------------------------------------------
    # 算术
    # ------------------------------------------------------------------

    def _check(self, other: "FormalSeries") -> None:
        if self.truncation != other.truncation:
            raise TruncationMismatchError(self.truncation, other.truncation)

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        if not isinstance(other, FormalSeries):
            return NotImplemented
        self._check(other)
        merged = dict(self._coeffs)
        for key, value in other._coeffs.items():
            merged[key] = merged[key] + value if key in merged else value
        return FormalSeries(merged, self.truncation)

    def __neg__(self) -> "FormalSeries":
        return FormalSeries({key: -value for key, value in self._coeffs.items()}, self.truncation)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + (-other)

    def scale(self, factor: Any) -> "FormalSeries":
        """逐项乘以标量因子"""
        return FormalSeries({key: value * factor for key, value in self._coeffs.items()},
                            self.truncation)

    def mul(self, other: "FormalSeries", product: Optional[Product] = None) -> "FormalSeries":
        """
        截断 Cauchy 乘积

        Args:
            other: 另一个级数，截断必须一致
            product: 系数乘法，缺省为 *

        Returns:
            FormalSeries: 乘积级数

        Raises:
            TruncationMismatchError: 截断不一致
        """
        self._check(other)
        product = product or _default_product
        h_max, g_max = self.truncation
        result: Dict[Bidegree, Any] = {}
        for (h1, g1), left in self._coeffs.items():
            for (h2, g2), right in other._coeffs.items():
                key = (h1 + h2, g1 + g2)
                if key[0] > h_max or key[1] > g_max:
                    continue
                value = product(left, right)
                result[key] = result[key] + value if key in result else value
        return FormalSeries(result, self.truncation)

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            return self.mul(other)
        if isinstance(other, (ExactScalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (ExactScalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def shift_hbar(self, k: int) -> "FormalSeries":
        """乘以 ħ^k；k 为负时要求所有项的 ħ 阶至少为 -k"""
        if k < 0 and any(h + k < 0 for h, _ in self._coeffs):
            raise ValueError(f"ħ 平移 {k} 会产生负 ħ 阶")
        return FormalSeries({(h + k, g): value for (h, g), value in self._coeffs.items()},
                            self.truncation)

    def shift_coupling(self, k: int) -> "FormalSeries":
        if k < 0 and any(g + k < 0 for _, g in self._coeffs):
            raise ValueError(f"耦合平移 {k} 会产生负耦合阶")
        return FormalSeries({(h, g + k): value for (h, g), value in self._coeffs.items()},
                            self.truncation)

    def map_coefficients(self, fn: Callable[[Any], Any]) -> "FormalSeries":
        return FormalSeries({key: fn(value) for key, value in self._coeffs.items()},
                            self.truncation)

    def truncate(self, truncation: Bidegree) -> "FormalSeries":
        return FormalSeries(self._coeffs, truncation)

    def power(self, n: int, product: Optional[Product] = None,
              one: Any = None) -> "FormalSeries":
        result = FormalSeries.constant(one, self.truncation)
        for _ in range(n):
            result = result.mul(self, product)
        return result

    def _max_power(self) -> int:
        return sum(self.truncation)

    def exp(self, product: Optional[Product] = None, one: Any = None) -> "FormalSeries":
        """
        指数级数，要求常数项为零

        Raises:
            ConstantTermError: 常数项非零
        """
        constant = self.constant_term()
        if constant is not None and not _is_zero(constant):
            raise ConstantTermError("exp", constant)
        result = FormalSeries.constant(one, self.truncation)
        power = FormalSeries.constant(one, self.truncation)
        for n in range(1, self._max_power() + 1):
            power = power.mul(self, product)
            if power.is_zero():
                break
            result = result + power.scale(Fraction(1, math.factorial(n)))
        return result

    def log(self, product: Optional[Product] = None, one: Any = None) -> "FormalSeries":
        """
        对数级数，要求常数项为一

        Raises:
            ConstantTermError: 常数项不等于一
        """
        unit = ExactScalar.one() if one is None else one
        constant = self.constant_term()
        if constant is None or constant != unit:
            raise ConstantTermError("log", constant)
        shifted = self - FormalSeries.constant(unit, self.truncation)
        result = FormalSeries({}, self.truncation)
        power = FormalSeries.constant(unit, self.truncation)
        for n in range(1, self._max_power() + 1):
            power = power.mul(shifted, product)
            if power.is_zero():
                break
            sign = 1 if n % 2 else -1
            result = result + power.scale(Fraction(sign, n))
        return result

    # ------------------------------------------------------------------
    # 比较与渲染
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.truncation == other.truncation and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.truncation, tuple(sorted(self._coeffs.items(), key=lambda kv: kv[0]))))

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (h, g), value in self.items():
            text = value.to_text() if hasattr(value, "to_text") else str(value)
            parts.append(f"({text}) hbar^{h} g^{g}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FormalSeries({self.to_text()}, truncation={self.truncation})"


def series_mul(s: FormalSeries, t: FormalSeries, product: Optional[Product] = None) -> FormalSeries:
    return s.mul(t, product)


def series_exp(s: FormalSeries, product: Optional[Product] = None, one: Any = None) -> FormalSeries:
    return s.exp(product, one)


def series_log(s: FormalSeries, product: Optional[Product] = None, one: Any = None) -> FormalSeries:
    return s.log(product, one)
