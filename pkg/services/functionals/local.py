"""
局域泛函模块
多项式密度的抹平积分 ∫ f · c·(m²)^j·ħ^h·g^k · 单项式 的表示与运算

主要功能：
1. TestFunction / Smearing / LocalTerm / LocalFunctional 的规范表示
2. 泛函导数: 对角线上的 δ 链核及 n=2 的质心/相对坐标分解
3. 标度作用 σ_ρ（精确群律）
4. 数值求值与可加性检查

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from services.common.errors import NonPolynomialError, SupportPreconditionError
from services.exact import Atom, ExactScalar
from .monomial import DERIV, PLAIN, FieldMonomial
from .numeric import BumpProfile, FieldConfiguration, Grid
from .support import Box, SupportRegion

logger = logging.getLogger("pqft.functionals.local")

Number = Union[int, Fraction, float]


def scale_region(region: SupportRegion, factor: Number) -> SupportRegion:
    """{x/factor : x ∈ region}，即 f(factor·x) 的支集"""
    if factor == 1:
        return region
    boxes = []
    for box in region.boxes:
        lower = tuple(float(v) / float(factor) for v in box.lower)
        upper = tuple(float(v) / float(factor) for v in box.upper)
        boxes.append(Box(lower, upper))
    return SupportRegion(tuple(boxes))


@dataclass(frozen=True)
class TestFunction:
    """抽象测试函数槽；需要数值配对时附带具体 bump 剖面"""
    __test__ = False

    name: str
    region: SupportRegion = field(default_factory=SupportRegion.empty)
    profile: Optional[BumpProfile] = None

    @classmethod
    def bump(cls, name: str, center: Sequence[float], radius: float = 1.0,
             height: float = 1.0) -> "TestFunction":
        profile = BumpProfile(tuple(float(c) for c in center), radius, height)
        return cls(name, profile.region, profile)


@dataclass(frozen=True, order=True)
class Smearing:
    """
    抹平因子 ∏_s f_s(dilation·x)

    slots 为排序后的测试函数名元组，空元组表示常数 1
    """
    slots: Tuple[str, ...] = ()
    dilation: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(sorted(self.slots)))

    def merged(self, other: "Smearing") -> "Smearing":
        """同点乘积，两边伸缩必须一致"""
        if self.dilation != other.dilation:
            raise ValueError(f"伸缩不一致的抹平因子不能合并: {self.dilation} / {other.dilation}")
        return Smearing(self.slots + other.slots, self.dilation)

    @property
    def text(self) -> str:
        if not self.slots:
            return "1"
        body = "·".join(self.slots)
        return body if self.dilation == 1 else f"{body}[{self.dilation}x]"


@dataclass(frozen=True)
class LocalTerm:
    """单项: coefficient · ħ^hbar · g^coupling · (m²)^mass · ∫ smearing · monomial"""
    monomial: FieldMonomial
    coefficient: ExactScalar
    smearing: Smearing = field(default_factory=Smearing)
    hbar: int = 0
    coupling: int = 0
    mass: int = 0
    # 指数非整数时尚未并入系数的 σ_ρ 累计因子
    scale: Fraction = Fraction(1)

    @property
    def key(self) -> tuple:
        return (self.monomial, self.smearing, self.hbar, self.coupling, self.mass, self.scale)

    def scaling_exponent(self, dim: int) -> Fraction:
        """σ_ρ 的权重指数 d − k(d−2)/2 − D"""
        return Fraction(dim) - Fraction(self.monomial.degree * (dim - 2), 2) - self.monomial.deriv

    def weight(self, dim: int) -> Number:
        """scale^e，只在奇数维出现非整数指数"""
        if self.scale == 1:
            return 1
        return float(self.scale) ** float(self.scaling_exponent(dim))

    def with_coefficient(self, coefficient: ExactScalar) -> "LocalTerm":
        return replace(self, coefficient=coefficient)

    def text(self) -> str:
        parts = [f"({self.coefficient.to_text()})"]
        if self.hbar:
            parts.append(f"hbar^{self.hbar}")
        if self.coupling:
            parts.append(f"g^{self.coupling}")
        if self.mass:
            parts.append(f"m2^{self.mass}")
        parts.append(f"∫{self.smearing.text}·{self.monomial.display}")
        return " ".join(parts)


class LocalFunctional:
    """
    局域泛函：LocalTerm 的有限和

    构造时按 key 合并系数并删除零项，因此相等性可判定。
    """

    def __init__(self, terms: Iterable[LocalTerm] = (), dim: int = 4,
                 test_functions: Optional[Mapping[str, TestFunction]] = None):
        self.dim = dim
        self.test_functions: Dict[str, TestFunction] = dict(test_functions or {})
        merged: Dict[tuple, LocalTerm] = {}
        for term in terms:
            if term.key in merged:
                old = merged[term.key]
                merged[term.key] = old.with_coefficient(old.coefficient + term.coefficient)
            else:
                merged[term.key] = term
        self.terms: Tuple[LocalTerm, ...] = tuple(
            sorted((t for t in merged.values() if not t.coefficient.is_zero()),
                   key=lambda t: (t.monomial, t.smearing, t.hbar, t.coupling, t.mass, t.scale))
        )
        self.logger = logging.getLogger("pqft.functionals.local.LocalFunctional")

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, dim: int = 4) -> "LocalFunctional":
        return cls((), dim)

    @classmethod
    def monomial(cls, monomial: FieldMonomial, test_function: Optional[TestFunction] = None,
                 coefficient: Any = 1, dim: int = 4, hbar: int = 0, coupling: int = 0,
                 mass: int = 0) -> "LocalFunctional":
        """∫ f · coefficient · monomial；test_function 为 None 时为常数抹平"""
        slots = (test_function.name,) if test_function else ()
        functions = {test_function.name: test_function} if test_function else {}
        term = LocalTerm(monomial, ExactScalar.coerce(coefficient), Smearing(slots), hbar, coupling, mass)
        return cls((term,), dim, functions)

    def _combine_functions(self, other: "LocalFunctional") -> Dict[str, TestFunction]:
        functions = dict(self.test_functions)
        for name, tf in other.test_functions.items():
            if name in functions and functions[name] != tf:
                raise ValueError(f"同名测试函数定义冲突: {name}")
            functions[name] = tf
        return functions

    def with_terms(self, terms: Iterable[LocalTerm],
                   functions: Optional[Mapping[str, TestFunction]] = None) -> "LocalFunctional":
        return LocalFunctional(terms, self.dim, self.test_functions if functions is None else functions)

    # ------------------------------------------------------------------
    # 线性运算
    # ------------------------------------------------------------------

    def __add__(self, other: "LocalFunctional") -> "LocalFunctional":
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"维数不一致: {self.dim} / {other.dim}")
        return self.with_terms(self.terms + other.terms, self._combine_functions(other))

    def __neg__(self) -> "LocalFunctional":
        return self.with_terms(t.with_coefficient(-t.coefficient) for t in self.terms)

    def __sub__(self, other: "LocalFunctional") -> "LocalFunctional":
        return self + (-other)

    def scale(self, factor: Any) -> "LocalFunctional":
        factor = ExactScalar.coerce(factor)
        return self.with_terms(t.with_coefficient(t.coefficient * factor) for t in self.terms)

    def shift(self, hbar: int = 0, coupling: int = 0, mass: int = 0) -> "LocalFunctional":
        return self.with_terms(replace(t, hbar=t.hbar + hbar, coupling=t.coupling + coupling,
                                       mass=t.mass + mass) for t in self.terms)

    def map_coefficients(self, fn: Callable[[ExactScalar], ExactScalar]) -> "LocalFunctional":
        return self.with_terms(t.with_coefficient(fn(t.coefficient)) for t in self.terms)

    def substitute(self, atom: Atom, value: ExactScalar) -> "LocalFunctional":
        return self.map_coefficients(lambda c: c.substitute(atom, value))

    def derivative(self, atom: Atom) -> "LocalFunctional":
        return self.map_coefficients(lambda c: c.derivative(atom))

    def conj(self) -> "LocalFunctional":
        return self.map_coefficients(lambda c: c.conj())

    def filter(self, predicate: Callable[[LocalTerm], bool]) -> "LocalFunctional":
        return self.with_terms(t for t in self.terms if predicate(t))

    def truncate(self, coupling_max: int) -> "LocalFunctional":
        return self.filter(lambda t: t.coupling <= coupling_max)

    # ------------------------------------------------------------------
    # 访问
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, self.terms))

    def coefficient(self, monomial: FieldMonomial, smearing: Smearing = Smearing(),
                    hbar: int = 0, coupling: int = 0, mass: int = 0) -> ExactScalar:
        for term in self.terms:
            if term.key[:5] == (monomial, smearing, hbar, coupling, mass):
                return term.coefficient
        return ExactScalar.zero()

    def max_degree(self) -> int:
        return max((t.monomial.degree for t in self.terms), default=0)

    def term_support(self, term: LocalTerm) -> SupportRegion:
        """∏ f_s 的支集；常数抹平没有有界支集，返回空区域"""
        region = None
        for slot in term.smearing.slots:
            tf = self.test_functions.get(slot)
            if tf is None:
                raise KeyError(f"未注册的测试函数: {slot}")
            piece = scale_region(tf.region, term.smearing.dilation)
            region = piece if region is None else region.intersection(piece)
        return region if region is not None else SupportRegion.empty()

    def support(self) -> SupportRegion:
        region = SupportRegion.empty()
        for term in self.terms:
            region = region.union(self.term_support(term))
        return region

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(t.text() for t in self.terms)

    def descriptor(self) -> List[Dict[str, Any]]:
        return [{
            "monomial": t.monomial.name,
            "coefficient": t.coefficient.to_text(),
            "smearing": list(t.smearing.slots),
            "dilation": str(t.smearing.dilation),
            "hbar": t.hbar,
            "coupling": t.coupling,
            "mass": t.mass,
        } for t in self.terms]

    def __repr__(self) -> str:
        return f"LocalFunctional({self.to_text()})"

    # ------------------------------------------------------------------
    # 标度
    # ------------------------------------------------------------------

    def sigma_rho(self, rho: Number) -> "LocalFunctional":
        """
        标度作用 σ_ρ

        单项乘以 ρ^{d − k(d−2)/2 − D}，抹平 f(x) → f(ρx)。整数指数直接并入精确系数，
        非整数指数累计在 scale 上，因此 σ_ρ∘σ_τ = σ_{ρτ} 精确成立

        Raises:
            ValueError: ρ 不是正数
        """
        if rho <= 0:
            raise ValueError(f"标度参数必须为正: {rho}")
        factor = Fraction(rho) if isinstance(rho, (int, Fraction)) else Fraction(rho).limit_denominator(10 ** 12)
        terms = []
        for t in self.terms:
            smearing = Smearing(t.smearing.slots, t.smearing.dilation * factor)
            exponent = t.scaling_exponent(self.dim)
            if exponent.denominator == 1:
                terms.append(replace(t, smearing=smearing,
                                     coefficient=t.coefficient * factor ** int(exponent)))
            else:
                terms.append(replace(t, smearing=smearing, scale=t.scale * factor))
        return self.with_terms(terms)

    # ------------------------------------------------------------------
    # 数值
    # ------------------------------------------------------------------

    def density_values(self, term: LocalTerm, phi: np.ndarray, grid: Grid) -> np.ndarray:
        """
        归一化密度 φ^p/p!·(∂φ)^k/k! 的网格值

        Raises:
            NonPolynomialError: 单导数向量单项式没有标量数值形式
        """
        monomial = term.monomial
        values = phi ** monomial.phi / float(math.factorial(monomial.phi)) if monomial.phi else np.ones_like(phi)
        if monomial.deriv == 1:
            raise NonPolynomialError(f"向量单项式 {monomial.name} 不能标量求值")
        if monomial.deriv == 2:
            values = values * grid.minkowski_square(phi) / 2.0
        return values

    def smearing_values(self, term: LocalTerm, grid: Grid) -> np.ndarray:
        values = np.ones(grid.coordinates.shape[1:])
        for slot in term.smearing.slots:
            tf = self.test_functions.get(slot)
            if tf is None or tf.profile is None:
                raise KeyError(f"测试函数 {slot} 没有数值剖面")
            values = values * tf.profile.values(grid.coordinates * float(term.smearing.dilation))
        return values

    def evaluate(self, phi: Union[FieldConfiguration, np.ndarray], grid: Grid,
                 atom_values: Optional[Mapping[Atom, float]] = None) -> complex:
        """
        在场位形上数值求值

        Args:
            phi: 场位形或网格上的场值数组
            grid: 积分网格
            atom_values: 系数中符号原子的数值

        Returns:
            complex: F(φ)，m² 因子按 1 计
        """
        values = phi.on(grid) if isinstance(phi, FieldConfiguration) else np.asarray(phi)
        total = 0j
        for term in self.terms:
            coefficient = complex(term.coefficient.evaluate(atom_values))
            integrand = self.smearing_values(term, grid) * self.density_values(term, values, grid)
            total += coefficient * float(term.weight(self.dim)) * grid.integrate(integrand)
        return total

    # ------------------------------------------------------------------
    # 泛函导数
    # ------------------------------------------------------------------

    def functional_derivative(self, n: int) -> "DiagonalKernel":
        return functional_derivative(self, n)


@dataclass(frozen=True)
class DiagonalTerm:
    """
    n 阶导数核的一项: coefficient · ∫ smearing · remaining · ∏_i L_i δ(x_i − x)

    legs[i] 为第 i 个参数的腿类型，deriv 表示该 δ 带一个被缩并的导数
    """
    coefficient: ExactScalar
    remaining: FieldMonomial
    smearing: Smearing
    legs: Tuple[str, ...]
    hbar: int = 0
    coupling: int = 0
    mass: int = 0

    def text(self) -> str:
        deltas = " ".join(("∂" if leg == DERIV else "") + f"δ(x{i + 1}−x)" for i, leg in enumerate(self.legs))
        return f"({self.coefficient.to_text()}) {self.smearing.text}·{self.remaining.display} {deltas}"


@dataclass(frozen=True)
class CenterRelativeTerm:
    """
    质心/相对坐标形式的一项: coefficient · ∂^{center}(f·remaining)(x) · ∂^{relative}δ(ξ)

    center_derivatives 与 relative_derivatives 为导数个数（两个时相互缩并）
    """
    coefficient: ExactScalar
    remaining: FieldMonomial
    smearing: Smearing
    center_derivatives: int
    relative_derivatives: int

    def text(self) -> str:
        inner = f"{self.smearing.text}·{self.remaining.display}"
        center = "∂" * self.center_derivatives + (f"({inner})" if self.center_derivatives else inner)
        relative = "∂" * self.relative_derivatives + "δ(ξ)"
        return f"({self.coefficient.to_text()}) {center} {relative}"


@dataclass
class DiagonalKernel:
    """局域泛函 n 阶导数的对角核，结构上只支撑在细对角线上"""
    order: int
    terms: List[DiagonalTerm]

    def is_zero(self) -> bool:
        return not self.terms

    def is_delta_chain(self) -> bool:
        return all(len(t.legs) == self.order for t in self.terms)

    def center_relative(self) -> List[CenterRelativeTerm]:
        """
        n=2 时按 ∂₁ = ½∂_x + ∂_ξ，∂₂ = ½∂_x − ∂_ξ 展开

        Raises:
            ValueError: 阶数不是 2
        """
        if self.order != 2:
            raise ValueError(f"质心/相对分解只实现了二阶: {self.order}")
        rules = {
            (PLAIN, PLAIN): [(Fraction(1), 0, 0)],
            (PLAIN, DERIV): [(Fraction(-1, 2), 1, 0), (Fraction(1), 0, 1)],
            (DERIV, PLAIN): [(Fraction(-1, 2), 1, 0), (Fraction(-1), 0, 1)],
            (DERIV, DERIV): [(Fraction(1, 4), 2, 0), (Fraction(-1), 0, 2)],
        }
        merged: Dict[tuple, ExactScalar] = {}
        for term in self.terms:
            for factor, center, relative in rules[term.legs]:
                key = (term.remaining, term.smearing, center, relative)
                merged[key] = merged.get(key, ExactScalar.zero()) + term.coefficient * factor
        result = [CenterRelativeTerm(c, rem, sm, center, rel)
                  for (rem, sm, center, rel), c in merged.items() if not c.is_zero()]
        return sorted(result, key=lambda t: (-t.center_derivatives, t.relative_derivatives, t.remaining))

    def text(self) -> str:
        return " + ".join(t.text() for t in self.terms) if self.terms else "0"


def functional_derivative(functional: LocalFunctional, n: int) -> DiagonalKernel:
    """
    n 阶泛函导数

    归一化单项式每去掉一条腿因子为 1，因此每个有序腿类型分配给出一项；
    n 超过多项式次数时返回零核

    Raises:
        ValueError: n < 1
    """
    if n < 1:
        raise ValueError(f"导数阶数必须 ≥ 1: {n}")
    terms: List[DiagonalTerm] = []
    for term in functional.terms:
        for legs in itertools.product((PLAIN, DERIV), repeat=n):
            remaining: Optional[FieldMonomial] = term.monomial
            for leg in legs:
                remaining = remaining.remove_leg(leg) if remaining is not None else None
            if remaining is None:
                continue
            terms.append(DiagonalTerm(term.coefficient, remaining, term.smearing, legs,
                                      term.hbar, term.coupling, term.mass))
    return DiagonalKernel(n, terms)


class NonlocalSquare:
    """(∫fφ)² 型非局域泛函，作为可加性的反例"""

    def __init__(self, linear: LocalFunctional):
        if any(t.monomial.degree != 1 for t in linear.terms):
            raise ValueError("NonlocalSquare 需要线性泛函")
        self.linear = linear

    def evaluate(self, phi, grid: Grid, atom_values=None) -> complex:
        value = self.linear.evaluate(phi, grid, atom_values)
        return value * value

    def support(self) -> SupportRegion:
        return self.linear.support()


def check_additivity(functional, phi: FieldConfiguration, chi: FieldConfiguration,
                     psi: FieldConfiguration, grid: Grid, tolerance: float = 1e-9) -> bool:
    """
    检查 F(φ+χ+ψ) = F(φ+χ) − F(χ) + F(χ+ψ)

    Args:
        functional: 任何带 evaluate(phi, grid) 的泛函
        phi, chi, psi: 场位形，φ 与 ψ 的支集必须不相交
        grid: 数值网格
        tolerance: 相对容差

    Raises:
        SupportPreconditionError: φ 与 ψ 的支集相交
    """
    if phi.region.intersects(psi.region):
        raise SupportPreconditionError("φ 与 ψ 的支集相交，可加性前提不成立", relation="disjoint")
    left = functional.evaluate(phi + chi + psi, grid)
    right = (functional.evaluate(phi + chi, grid) - functional.evaluate(chi, grid)
             + functional.evaluate(chi + psi, grid))
    scale = max(1.0, abs(left), abs(right))
    passed = abs(left - right) <= tolerance * scale
    logger.debug(f"{'✅' if passed else '❌'} 可加性: 左 {left:.6e}, 右 {right:.6e}")
    return passed
