"""
分布延拓模块
几乎齐次分布的延拓：标度度数、发散度、标度破坏系数

主要功能：
1. DeltaPolynomial: Σ c_{k,j} (m²)^j □^k δ
2. c_k 闭式与 □^k(x²)^k 恒等式（sympy 暴力验证）
3. extend: 纯幂与单对数核的 ExtensionRecord
4. 显式对数延拓及其 κ 差

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

import sympy

from services.common.errors import ExtensionError
from services.exact import Atom, ExactScalar
from services.kernels import KernelExpr, KernelKind, KernelTag, log_tag, sphere_volume

logger = logging.getLogger("pqft.renorm.extension")

DeltaKey = Tuple[int, int]


class DeltaPolynomial:
    """
    δ 集中的微分算子 Σ c_{k,j} (m²)^j □^k δ

    键为 (□ 幂, m² 幂)，系数为 ExactScalar，零系数不保存
    """

    def __init__(self, coefficients: Optional[Dict[DeltaKey, ExactScalar]] = None):
        self._coefficients: Dict[DeltaKey, ExactScalar] = {}
        for key, value in (coefficients or {}).items():
            value = ExactScalar.coerce(value)
            if not value.is_zero():
                self._coefficients[tuple(key)] = value

    @classmethod
    def zero(cls) -> "DeltaPolynomial":
        return cls()

    @classmethod
    def single(cls, coefficient: Any, box_power: int = 0, mass_power: int = 0) -> "DeltaPolynomial":
        return cls({(box_power, mass_power): ExactScalar.coerce(coefficient)})

    def __add__(self, other: "DeltaPolynomial") -> "DeltaPolynomial":
        merged = dict(self._coefficients)
        for key, value in other._coefficients.items():
            merged[key] = merged.get(key, ExactScalar.zero()) + value
        return DeltaPolynomial(merged)

    def __neg__(self) -> "DeltaPolynomial":
        return self.scale(-1)

    def __sub__(self, other: "DeltaPolynomial") -> "DeltaPolynomial":
        return self + (-other)

    def __mul__(self, factor) -> "DeltaPolynomial":
        return self.scale(factor)

    def scale(self, factor: Any) -> "DeltaPolynomial":
        factor = ExactScalar.coerce(factor)
        return DeltaPolynomial({k: v * factor for k, v in self._coefficients.items()})

    def map_coefficients(self, fn) -> "DeltaPolynomial":
        return DeltaPolynomial({k: fn(v) for k, v in self._coefficients.items()})

    def conj(self) -> "DeltaPolynomial":
        return self.map_coefficients(lambda v: v.conj())

    def coefficient(self, box_power: int = 0, mass_power: int = 0) -> ExactScalar:
        return self._coefficients.get((box_power, mass_power), ExactScalar.zero())

    def items(self) -> Iterator[Tuple[DeltaKey, ExactScalar]]:
        return iter(sorted(self._coefficients.items()))

    def is_zero(self) -> bool:
        return not self._coefficients

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeltaPolynomial):
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self):
        return hash(tuple(self.items()))

    def to_text(self) -> str:
        if not self._coefficients:
            return "0"
        parts = []
        for (box, mass), value in self.items():
            op = "δ" if box == 0 else ("□δ" if box == 1 else f"□^{box}δ")
            m = "" if mass == 0 else ("m²" if mass == 1 else f"m^{2 * mass}")
            parts.append(f"({value.to_text()}){m}{op}")
        return " + ".join(parts)

    def descriptor(self) -> List[Dict[str, Any]]:
        return [{"boxPower": box, "massPower": mass, "coefficient": value.to_text()}
                for (box, mass), value in self.items()]

    def __repr__(self) -> str:
        return f"DeltaPolynomial({self.to_text()})"


@dataclass
class ExtensionRecord:
    """核的延拓记录：标度度数 sd、发散度 ω = sd − n、标度破坏与对数幂"""
    kernel: KernelExpr
    ambient_dim: int
    sd: Fraction
    omega: Fraction
    violation: DeltaPolynomial = field(default_factory=DeltaPolynomial)
    log_power: int = 0

    @property
    def unique(self) -> bool:
        return self.omega < 0 or self.omega.denominator != 1

    def descriptor(self) -> Dict[str, Any]:
        return {
            "sd": str(self.sd),
            "omega": str(self.omega),
            "unique": self.unique,
            "violation": [[box, value.to_text()] for (box, _), value in self.violation.items()],
            "logPower": self.log_power,
        }


def c_k(d: int, s: int, k: int) -> ExactScalar:
    """
    (x²−iε)^{−d/2−k} 的标度破坏系数 iˢ|S^{d−1}|(d/2−1)!/(2^{2k} k! (d/2+k−1)!)

    Raises:
        ValueError: d 为奇数、号差越界或 k < 0
    """
    if d % 2:
        raise ValueError(f"c_k 只对偶数维精确: d={d}")
    if not 0 <= s <= d or k < 0:
        raise ValueError(f"无效参数: s={s}, k={k}")
    n = d // 2
    ratio = Fraction(math.factorial(n - 1), 4 ** k * math.factorial(k) * math.factorial(n + k - 1))
    return ExactScalar.term(1, i_power=s) * sphere_volume(d) * ratio


def box_power_identity(d: int, k: int) -> Fraction:
    """
    □^k (x²)^k = 2^{2k} k! (d/2+k−1)!/(d/2−1)!

    按 □(x²)^m = 2m(2m+d−2)(x²)^{m−1} 逐步相乘，奇数维同样成立
    """
    if k < 0:
        raise ValueError(f"k 必须非负: {k}")
    value = Fraction(1)
    for m in range(1, k + 1):
        value *= 2 * m * (2 * m + d - 2)
    return value


def box_power_brute_force(d: int, k: int, s: Optional[int] = None) -> Fraction:
    """对多项式 (x²)^k 逐分量求 □^k 的符号计算"""
    s = d - 1 if s is None else s
    coords = sympy.symbols(f"x0:{d}", real=True)
    signs = [1] * (d - s) + [-1] * s
    square = sum(sign * x ** 2 for sign, x in zip(signs, coords))
    expr = sympy.expand(square ** k)
    for _ in range(k):
        expr = sympy.expand(sum(sign * sympy.diff(expr, x, 2) for sign, x in zip(signs, coords)))
    return Fraction(int(expr))


def box_scaling_coefficient(d: int, s: int) -> ExactScalar:
    """□ (x²−iε)^{1−d/2} = iˢ(2−d)|S^{d−1}| δ"""
    return ExactScalar.term(2 - d, i_power=s) * sphere_volume(d)


def _split_kernel(kernel: KernelExpr) -> Tuple[int, Optional[Atom]]:
    power = 0
    log_atom = None
    for tag in kernel.factors:
        if tag.kind is KernelKind.POWER_X2_INV:
            power += tag.power
        elif tag.kind is KernelKind.LOG_OVER_X2_POW:
            if log_atom is not None:
                raise ExtensionError("多于一个对数因子的核不在目录中", kernel=kernel.descriptor())
            power += tag.power
            log_atom = tag.kappa
        else:
            raise ExtensionError(f"核不在幂目录中: {tag.short()}", kernel=kernel.descriptor())
    return power, log_atom


def log_violation(d: int, s: int, kappa: Atom, k: int = 0) -> ExactScalar:
    """
    log(−κ²u)/u^{d/2} 的 τ 参数化显式延拓的标度破坏

    c₀(1/(d/2−1) + log(κ²/τ²))，只有 k=0
    """
    if k:
        raise ExtensionError(f"对数核只支持 ω=0: k={k}", kernel={"log": kappa.value})
    bracket = (ExactScalar.rational(Fraction(1, d // 2 - 1)) + ExactScalar.atom(kappa) * 2
               - ExactScalar.atom(Atom.LOG_TAU) * 2)
    return c_k(d, s, 0) * bracket


def extend(kernel: KernelExpr, ambient_dim: Optional[int] = None) -> ExtensionRecord:
    """
    单相对坐标核的延拓

    ω < 0 或非整数时唯一，标度破坏为零；ω = 2k 时纯幂核的破坏为 prefactor·c_k·□^kδ，
    单对数核（仅 k=0）使用 τ 参数化显式延拓

    Raises:
        ExtensionError: 核不在目录中
    """
    n = kernel.dim if ambient_dim is None else ambient_dim
    power, log_atom = _split_kernel(kernel)
    sd = Fraction(2 * power)
    omega = sd - n
    record = ExtensionRecord(kernel, n, sd, omega, DeltaPolynomial(), kernel.log_power)
    if record.unique or omega.numerator % 2:
        logger.debug(f"唯一延拓: sd={sd}, ω={omega}")
        return record
    if n != kernel.dim:
        raise ExtensionError(f"多坐标核需要先做 Feynman 参数约化: n={n}", kernel=kernel.descriptor())
    k = int(omega) // 2
    if log_atom is None:
        value = kernel.prefactor * c_k(kernel.dim, kernel.sig, k)
        record.log_power = 1
    else:
        value = kernel.prefactor * log_violation(kernel.dim, kernel.sig, log_atom, k)
        record.log_power = 2
    record.violation = DeltaPolynomial.single(value, k)
    logger.debug(f"延拓 {kernel.descriptor()}: ω={omega}, 破坏 {record.violation.to_text()}")
    return record


@dataclass(frozen=True)
class ExplicitExtension:
    """t = prefactor·□[log(−κ²u)/u^{d/2−1}]，(x²−iε)^{−d/2} 的显式延拓"""
    dim: int
    sig: int
    kappa: Atom
    prefactor: Fraction

    @property
    def kernel(self) -> KernelExpr:
        return KernelExpr(ExactScalar.rational(self.prefactor),
                          (log_tag(self.dim, self.dim // 2 - 1, self.kappa, self.sig),))

    def scaling_violation(self) -> ExactScalar:
        """log(−κ²ρ²u) = log(−κ²u) + 2log ρ，再用 □u^{1−d/2} 的 δ 系数"""
        return box_scaling_coefficient(self.dim, self.sig) * (2 * self.prefactor)

    def kappa_difference(self, log_ratio: ExactScalar) -> ExactScalar:
        """t_{κ₂} − t_{κ₁} 的 δ 系数，log_ratio = log(κ₂/κ₁)"""
        return box_scaling_coefficient(self.dim, self.sig) * (2 * self.prefactor) * log_ratio

    def descriptor(self) -> Dict[str, Any]:
        return {"dim": self.dim, "sig": self.sig, "kappa": self.kappa.value,
                "prefactor": str(self.prefactor), "form": "box[log(-k^2 u)/u^(d/2-1)]"}


def explicit_extension(d: int, kappa: Atom = Atom.LOG_KAPPA, s: Optional[int] = None) -> ExplicitExtension:
    """
    (x²−iε)^{−d/2} 的对数延拓 t = 1/(4−2d)·□[log(−κ²u)/u^{d/2−1}]

    Raises:
        ValueError: d 为奇数或小于 4
    """
    if d % 2 or d < 4:
        raise ValueError(f"显式延拓需要偶数 d ≥ 4: {d}")
    return ExplicitExtension(d, d - 1 if s is None else s, kappa, Fraction(1, 4 - 2 * d))


def kappa_family_offset(kernel: KernelExpr, kappa: Atom = Atom.LOG_KAPPA) -> DeltaPolynomial:
    """
    κ 参数化延拓族相对参照延拓（κ=1）的偏移

    仅对 ω=0 的纯幂核定义：prefactor·iˢ|S^{d−1}|·log κ
    """
    record = extend(kernel)
    if record.unique or record.omega != 0 or record.log_power != 1:
        raise ExtensionError("κ 族只对 ω=0 的纯幂核定义", kernel=kernel.descriptor())
    ext = explicit_extension(kernel.dim, kappa, kernel.sig)
    return DeltaPolynomial.single(kernel.prefactor * ext.kappa_difference(ExactScalar.atom(kappa)))


def power_kernel(d: int, power: int, prefactor: Any = 1, s: Optional[int] = None) -> KernelExpr:
    """prefactor·(x²−iε)^{−power}"""
    tag = KernelTag(KernelKind.POWER_X2_INV, dim=d, sig=d - 1 if s is None else s, power=power)
    return KernelExpr(ExactScalar.coerce(prefactor), (tag,))
