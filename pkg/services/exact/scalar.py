"""
精确标量模块
实现系数域 ExactScalar：有理数 × i^a × π^b × 对数符号单项式 的有限和

主要功能：
1. 规范形式的加、减、乘、整数幂、共轭
2. 对符号原子的形式求导与代换
3. 基于 mpmath 的数值求值
4. 规范文本形式 "q * i^a * pi^b * SYM^k" 的输出与解析

作者: Assistant
创建时间: 2024年
"""

import logging
import re
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import mpmath

logger = logging.getLogger("pqft.exact")


class Atom(Enum):
    """符号原子，彼此交换且只满足线性关系"""
    LOG_RHO = "LOG_RHO"
    LOG_MU = "LOG_MU"
    LOG_TAU = "LOG_TAU"
    LOG_KAPPA = "LOG_KAPPA"
    LOG_LAMBDA = "LOG_LAMBDA"
    EULER_C = "EULER_C"
    F0 = "F0"


# (a, b, ((原子名, 指数), ...))
TermKey = Tuple[int, int, Tuple[Tuple[str, int], ...]]
Number = Union[int, Fraction]

_ATOM_BY_NAME = {atom.value: atom for atom in Atom}


def _merge_syms(left: Tuple[Tuple[str, int], ...],
                right: Tuple[Tuple[str, int], ...]) -> Tuple[Tuple[str, int], ...]:
    """合并两个符号单项式"""
    powers: Dict[str, int] = dict(left)
    for name, k in right:
        powers[name] = powers.get(name, 0) + k
    return tuple(sorted((name, k) for name, k in powers.items() if k != 0))


class ExactScalar:
    """
    精确标量

    内部以 {(a, b, syms): q} 存储，a ∈ {0, 1}（i² 并入有理系数的符号），零系数项被删除。
    实例在构造后不可变，可以安全地在线程间共享。
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[TermKey, Number]] = None):
        canonical: Dict[TermKey, Fraction] = {}
        for (a, b, syms), q in (terms or {}).items():
            a %= 4
            sign = -1 if a >= 2 else 1
            key = (a % 2, b, _merge_syms((), tuple(syms)))
            canonical[key] = canonical.get(key, Fraction(0)) + sign * Fraction(q)
        self._terms: Tuple[Tuple[TermKey, Fraction], ...] = tuple(
            sorted((key, q) for key, q in canonical.items() if q != 0)
        )
        self._hash = None

    # ------------------------------------------------------------------
    # 构造辅助
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "ExactScalar":
        return cls()

    @classmethod
    def one(cls) -> "ExactScalar":
        return cls({(0, 0, ()): 1})

    @classmethod
    def rational(cls, q: Number) -> "ExactScalar":
        return cls({(0, 0, ()): Fraction(q)})

    @classmethod
    def term(cls, q: Number = 1, i_power: int = 0, pi_power: int = 0,
             syms: Optional[Mapping[Atom, int]] = None) -> "ExactScalar":
        """构造单项 q·i^a·π^b·Π sym^k"""
        sym_items = tuple((atom.value, k) for atom, k in (syms or {}).items())
        return cls({(i_power, pi_power, sym_items): Fraction(q)})

    @classmethod
    def i(cls) -> "ExactScalar":
        return cls.term(1, i_power=1)

    @classmethod
    def pi(cls, power: int = 1) -> "ExactScalar":
        return cls.term(1, pi_power=power)

    @classmethod
    def atom(cls, atom: Atom, power: int = 1) -> "ExactScalar":
        return cls.term(1, syms={atom: power})

    @classmethod
    def coerce(cls, value: Union["ExactScalar", Number]) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"无法转换为 ExactScalar: {value!r}")

    # ------------------------------------------------------------------
    # 访问
    # ------------------------------------------------------------------

    def terms(self) -> Iterator[Tuple[TermKey, Fraction]]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def is_rational(self) -> bool:
        return self.is_zero() or (len(self._terms) == 1 and self._terms[0][0] == (0, 0, ()))

    def as_fraction(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"不是有理数: {self}")
        return self._terms[0][1]

    def is_real(self) -> bool:
        """原子均为实数，因此只需 i 的幂为偶数"""
        return all(a % 2 == 0 for (a, _, _), _ in self._terms)

    def is_imaginary(self) -> bool:
        return all(a % 2 == 1 for (a, _, _), _ in self._terms)

    def free_atoms(self) -> set:
        return {_ATOM_BY_NAME[name] for (_, _, syms), _ in self._terms for name, _ in syms}

    def coefficient(self, i_power: int = 0, pi_power: int = 0,
                    syms: Optional[Mapping[Atom, int]] = None) -> Fraction:
        a = i_power % 4
        sign = -1 if a >= 2 else 1
        key = (a % 2, pi_power, tuple(sorted((s.value, k) for s, k in (syms or {}).items())))
        return sign * dict(self._terms).get(key, Fraction(0))

    def drop_atom(self, atom: Atom) -> "ExactScalar":
        """删除所有含该原子的项"""
        return ExactScalar({key: q for key, q in self._terms
                            if all(name != atom.value for name, _ in key[2])})

    # ------------------------------------------------------------------
    # 环运算
    # ------------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (ExactScalar, int, Fraction)):
            return NotImplemented
        other = ExactScalar.coerce(other)
        merged: Dict[TermKey, Fraction] = dict(self._terms)
        for key, q in other._terms:
            merged[key] = merged.get(key, Fraction(0)) + q
        return ExactScalar(merged)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar({key: -q for key, q in self._terms})

    def __sub__(self, other):
        if not isinstance(other, (ExactScalar, int, Fraction)):
            return NotImplemented
        return self + (-ExactScalar.coerce(other))

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExactScalar({key: q * other for key, q in self._terms})
        if not isinstance(other, ExactScalar):
            return NotImplemented
        product: Dict[TermKey, Fraction] = {}
        for (a1, b1, s1), q1 in self._terms:
            for (a2, b2, s2), q2 in other._terms:
                key = ((a1 + a2) % 4, b1 + b2, _merge_syms(s1, s2))
                product[key] = product.get(key, Fraction(0)) + q1 * q2
        return ExactScalar(product)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        """单项标量的逆"""
        if not self.is_single_term():
            raise ZeroDivisionError(f"只能对单项标量求逆: {self}")
        (a, b, syms), q = self._terms[0]
        return ExactScalar({(-a, -b, tuple((name, -k) for name, k in syms)): 1 / q})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "ExactScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ExactScalar.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "ExactScalar":
        """复共轭: i^a -> i^{-a}，原子为实数"""
        return ExactScalar({(-a, b, syms): q for (a, b, syms), q in self._terms})

    # ------------------------------------------------------------------
    # 符号操作
    # ------------------------------------------------------------------

    def derivative(self, atom: Atom) -> "ExactScalar":
        """对原子的形式偏导数"""
        result: Dict[TermKey, Fraction] = {}
        for (a, b, syms), q in self._terms:
            powers = dict(syms)
            k = powers.get(atom.value, 0)
            if k == 0:
                continue
            powers[atom.value] = k - 1
            key = (a, b, tuple(sorted(powers.items())))
            result[key] = result.get(key, Fraction(0)) + q * k
        return ExactScalar(result)

    def substitute(self, atom: Atom, value: "ExactScalar") -> "ExactScalar":
        """将原子替换为给定标量（原子须以非负幂出现）"""
        result = ExactScalar.zero()
        for (a, b, syms), q in self._terms:
            powers = dict(syms)
            k = powers.pop(atom.value, 0)
            if k < 0:
                raise ValueError(f"原子 {atom.value} 以负幂出现，不能代换")
            rest = ExactScalar({(a, b, tuple(sorted(powers.items()))): q})
            result = result + rest * (value ** k)
        return result

    def evaluate(self, values: Optional[Mapping[Atom, float]] = None, dps: int = 30) -> mpmath.mpc:
        """
        数值求值

        Args:
            values: 原子数值，EULER_C 默认取 Euler 常数
            dps: mpmath 十进制精度

        Returns:
            mpmath.mpc: 复数值

        Raises:
            KeyError: 存在未赋值的原子
        """
        values = dict(values or {})
        with mpmath.workdps(dps + 10):
            values.setdefault(Atom.EULER_C, mpmath.euler)
            total = mpmath.mpc(0)
            for (a, b, syms), q in self._terms:
                value = mpmath.mpf(q.numerator) / q.denominator
                value = value * (mpmath.mpc(0, 1) ** a) * (mpmath.pi ** b)
                for name, k in syms:
                    value = value * mpmath.mpf(values[_ATOM_BY_NAME[name]]) ** k
                total += value
            return +total

    # ------------------------------------------------------------------
    # 文本形式
    # ------------------------------------------------------------------

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for (a, b, syms), q in self._terms:
            factors = [str(q)]
            if a:
                factors.append(f"i^{a}")
            if b:
                factors.append(f"pi^{b}")
            factors.extend(f"{name}^{k}" for name, k in syms)
            pieces.append(" * ".join(factors))
        return " + ".join(pieces)

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """解析 to_text 的输出"""
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms: Dict[TermKey, Fraction] = {}
        for piece in re.split(r"\s\+\s", text):
            factors = [f.strip() for f in piece.split("*")]
            q = Fraction(factors[0])
            a, b, syms = 0, 0, []
            for factor in factors[1:]:
                name, _, exponent = factor.partition("^")
                k = int(exponent) if exponent else 1
                if name == "i":
                    a = k
                elif name == "pi":
                    b = k
                elif name in _ATOM_BY_NAME:
                    syms.append((name, k))
                else:
                    raise ValueError(f"无法解析的因子: {factor}")
            key = (a % 4, b, tuple(sorted(syms)))
            terms[key] = terms.get(key, Fraction(0)) + q
        return cls(terms)

    # ------------------------------------------------------------------
    # 比较与散列
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.rational(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"ExactScalar({self.to_text()})"

    __str__ = to_text


def scalar_sum(values: Iterable[ExactScalar]) -> ExactScalar:
    """标量求和"""
    total = ExactScalar.zero()
    for value in values:
        total = total + value
    return total


def to_decimal(value: ExactScalar, digits: int = 30,
               values: Optional[Mapping[Atom, float]] = None) -> Dict[str, str]:
    """
    以给定有效数字渲染实部和虚部

    含未赋值原子时返回 {"symbolic": True}
    """
    try:
        number = value.evaluate(values, dps=digits)
    except KeyError:
        return {"symbolic": True}
    return {
        "re": mpmath.nstr(number.real, digits),
        "im": mpmath.nstr(number.imag, digits),
    }
