"""
B 函数模块
真空通道标度破坏到拉格朗日量类的组装，以及 β 的定义式

主要功能：
1. Interaction: 交互项 c·g^k·(m²)^j·单项式（不含 i/ħ）
2. pair_classes / second_order_B: [½B⁽²⁾(ℒ⊗ℒ)] 按腿束逐一求标度破坏并归类
3. triangle_B: d=6 三顶点环图的 [B⁽³⁾/3!]
4. tilde: 提出交互中的 i/ħ，得到 (ħ/i)[B∘(i/ħ)ℒ]
5. assemble_beta: 波函数与质量重整化吸收后的 β

约定：单项式均为归一化形式 φⁿ/n!、(∂φ)²/2，腿束的核含 1/∏n_e!

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from services.common.errors import UnsupportedChannelError
from services.exact import DEFAULT_TRUNCATION, ExactScalar, FormalSeries
from services.functionals import (
    DERIV, DPHI2, PHI2, PLAIN, BasisKey, FieldMonomial, LagrangianClass, LocalFunctional,
    TestFunction, box_delta_class, delta_class,
)
from services.functionals.lagrangian import Bidegree
from services.renorm import DeltaPolynomial, channel_violation, triangle_coefficient
from services.rgroups import gamma_v

logger = logging.getLogger("pqft.models.bfunction")

Ends = Tuple[str, str]


@dataclass(frozen=True)
class Interaction:
    """交互项 coefficient·g^coupling·(m²)^mass·monomial"""
    monomial: FieldMonomial
    coefficient: ExactScalar = field(default_factory=ExactScalar.one)
    coupling: int = 1
    mass: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coefficient", ExactScalar.coerce(self.coefficient))

    @property
    def key(self) -> BasisKey:
        return BasisKey(self.monomial, self.mass)


def interaction_class(entries: Sequence[Interaction], dim: int,
                      truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> LagrangianClass:
    return LagrangianClass.from_entries(
        [(e.key, e.coefficient, 0, e.coupling) for e in entries], dim, truncation, **flags)


def interaction_functional(entries: Sequence[Interaction], dim: int) -> LocalFunctional:
    """∫f·ℒ，代数绝热极限下的代表元"""
    f = TestFunction("f")
    total = LocalFunctional.zero(dim)
    for e in entries:
        total = total + LocalFunctional.monomial(e.monomial, f, e.coefficient, dim=dim,
                                                 coupling=e.coupling, mass=e.mass)
    return total


# ----------------------------------------------------------------------
# 二阶：两顶点腿束
# ----------------------------------------------------------------------

def _bundle_choices(first: FieldMonomial, second: FieldMonomial) -> Iterable[Tuple[List[Ends], FieldMonomial, FieldMonomial]]:
    """枚举 (腿束, 左剩余, 右剩余)，每条边的两端类型为 (左, 右)"""
    kinds = [(PLAIN, PLAIN), (PLAIN, DERIV), (DERIV, PLAIN), (DERIV, DERIV)]
    limits = [min(first.legs(a), second.legs(b)) for a, b in kinds]
    for counts in itertools.product(*(range(n + 1) for n in limits)):
        if not sum(counts):
            continue
        left_plain = counts[0] + counts[1]
        left_deriv = counts[2] + counts[3]
        right_plain = counts[0] + counts[2]
        right_deriv = counts[1] + counts[3]
        if left_plain > first.phi or left_deriv > first.deriv:
            continue
        if right_plain > second.phi or right_deriv > second.deriv:
            continue
        ends: List[Ends] = []
        for kind, n in zip(kinds, counts):
            ends.extend([kind] * n)
        left = FieldMonomial(first.phi - left_plain, first.deriv - left_deriv)
        right = FieldMonomial(second.phi - right_plain, second.deriv - right_deriv)
        yield ends, left, right


def bundle_violation(dim: int, ends: Sequence[Ends]) -> DeltaPolynomial:
    """
    一束边在 φ=0 处的 B⁽²⁾（不含 ħ 幂），各质量阶求和

    无导数时的发散度 ω₀ < 0 的束是唯一延拓的导数，标度齐次，贡献为零

    Raises:
        UnsupportedChannelError: 发散且导数结构不在通道目录中
    """
    edges = len(ends)
    derivs = sum(end == DERIV for e in ends for end in e)
    omega = edges * (dim - 2) + derivs - dim
    if omega < 0 or edges * (dim - 2) - dim < 0:
        return DeltaPolynomial()
    total = DeltaPolynomial()
    for mass_order in range(omega // 2 + 1):
        total = total + channel_violation(dim, ends, mass_order)
    return total


def _classify(left: FieldMonomial, right: FieldMonomial, box: int) -> List[Tuple[Fraction, FieldMonomial]]:
    if box == 0:
        return [delta_class(left, right)]
    if box == 1:
        return box_delta_class(left, right)
    if left.is_constant() or right.is_constant():
        return []
    raise UnsupportedChannelError(f"□^{box}δ[{left.name}, {right.name}]")


def pair_classes(dim: int, first: Interaction, second: Interaction,
                 truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> LagrangianClass:
    """
    [B⁽²⁾(first⊗second)]，即 Σ_束 B⁽²⁾(束)|_{φ=0}·剩余场，不含 ½

    ħ 阶为束中边数，耦合阶为两项耦合阶之和
    """
    result = LagrangianClass({}, dim, truncation, **flags)
    weight = first.coefficient * second.coefficient
    coupling = first.coupling + second.coupling
    for ends, left, right in _bundle_choices(first.monomial, second.monomial):
        if left.is_constant() and right.is_constant():
            continue
        violation = bundle_violation(dim, ends)
        for (box, mass), value in violation.items():
            for factor, monomial in _classify(left, right, box):
                key = BasisKey(monomial, first.mass + second.mass + mass)
                result = result.add_entry(key, weight * value * factor, len(ends), coupling)
    return result


def second_order_B(dim: int, entries: Sequence[Interaction],
                   truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> LagrangianClass:
    """[½B⁽²⁾(ℒ⊗ℒ)]，对有序对求和"""
    total = LagrangianClass({}, dim, truncation, **flags)
    for first, second in itertools.product(entries, repeat=2):
        total = total + pair_classes(dim, first, second, truncation, **flags)
    return total.scale(Fraction(1, 2))


# ----------------------------------------------------------------------
# 三阶：d=6 三角图
# ----------------------------------------------------------------------

def triangle_B(dim: int, entries: Sequence[Interaction], tolerance: float = 1e-8,
               truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> Tuple[LagrangianClass, ExactScalar]:
    """
    [B⁽³⁾(ℒ⊗ℒ⊗ℒ)/3!] 中只局域于全对角线的三角图

    每个顶点各出两条无导数腿；d ≠ 6 时三角图 ω < 0，返回零

    Returns:
        (LagrangianClass, ExactScalar): 类与三角系数 a₂
    """
    result = LagrangianClass({}, dim, truncation, **flags)
    if 3 * (dim - 2) - 2 * dim != 0:
        return result, ExactScalar.zero()
    a2, _ = triangle_coefficient(tolerance, dim)
    for triple in itertools.product(entries, repeat=3):
        if any(e.monomial.phi < 2 for e in triple):
            continue
        factor = Fraction(1)
        remaining = FieldMonomial()
        for e in triple:
            piece = FieldMonomial(e.monomial.phi - 2, e.monomial.deriv)
            if piece.deriv + remaining.deriv > 2:
                raise UnsupportedChannelError(f"三角图剩余场超出基: {[x.monomial.name for x in triple]}")
            f, remaining = remaining.product(piece)
            factor *= f
        if remaining.is_constant():
            continue
        weight = triple[0].coefficient * triple[1].coefficient * triple[2].coefficient
        key = BasisKey(remaining, sum(e.mass for e in triple))
        result = result.add_entry(key, weight * a2 * factor * Fraction(1, 6), 3,
                                  sum(e.coupling for e in triple))
    return result, a2


# ----------------------------------------------------------------------
# β 的组装
# ----------------------------------------------------------------------

def tilde(display: LagrangianClass) -> LagrangianClass:
    """
    (ħ/i)[B∘(i/ħ)ℒ]：k 阶耦合分量乘 i^{k−1}ħ^{1−k}

    要求每个交互项的耦合阶为 1
    """
    components: Dict[BasisKey, FormalSeries] = {}
    for key in display.keys():
        series = FormalSeries({}, display.truncation)
        for (h, g), value in display.component(key).items():
            piece = FormalSeries.monomial(value * ExactScalar.term(1, i_power=g - 1), h, g,
                                          display.truncation)
            series = series + piece.shift_hbar(1 - g)
        components[key] = series
    return LagrangianClass(components, display.dim, display.truncation,
                           display.ignore_constants, display.ignore_linear)


def leg_counting(entries: Sequence[Interaction], dim: int, truncation: Bidegree = DEFAULT_TRUNCATION,
                 **flags) -> LagrangianClass:
    """⟨ℒ⁽¹⁾, φ⟩ 的经典部分：每项乘以场的个数"""
    return LagrangianClass.from_entries(
        [(e.key, e.coefficient * e.monomial.degree, 0, e.coupling) for e in entries],
        dim, truncation, **flags)


def mu_derivative(entries: Sequence[Interaction], dim: int, truncation: Bidegree = DEFAULT_TRUNCATION,
                  **flags) -> LagrangianClass:
    """(ħ/i)[μ d/dμ ℒ_μ] = −2ħ[Γ_v ℒ]"""
    functional = gamma_v(interaction_functional(entries, dim)).scale(-2).shift(hbar=1)
    return LagrangianClass.from_local(functional, truncation, **flags)


def scale_derivative(entries: Sequence[Interaction], dim: int, truncation: Bidegree = DEFAULT_TRUNCATION,
                     **flags) -> LagrangianClass:
    """[ρ d/dρ (ℒ^ρ)_μ]：每项乘以其标度指数（含 m² 的 ρ 幂）"""
    rows = []
    for e in entries:
        exponent = Fraction(dim) - e.monomial.engineering_dimension(dim)
        if exponent.denominator != 1:
            raise ValueError(f"非整数标度指数: {e.monomial.name} (d={dim})")
        if exponent:
            rows.append((e.key, e.coefficient * int(exponent), 0, e.coupling))
    return LagrangianClass.from_entries(rows, dim, truncation, **flags)


@dataclass
class BetaAssembly:
    """β 定义式的各部分"""
    components: LagrangianClass
    gamma_dot: FormalSeries
    lambda_dot: FormalSeries
    beta: LagrangianClass
    higher_order: LagrangianClass


def assemble_beta(components: LagrangianClass, entries: Sequence[Interaction], order: int,
                  **flags) -> BetaAssembly:
    """
    (ħ/i)β(ℒ) = B̃ − γ̇[(∂φ)²] − λ̇m²[φ²] + (γ̇/2)⟨ℒ⁽¹⁾,φ⟩ + [ρ∂_ρℒ^ρ] − 2ħ[Γ_vℒ]

    γ̇、λ̇ 直接从 B̃ 的 (∂φ)² 与 m²φ² 分量读出；耦合阶超过 order 的项归入 higher_order

    Args:
        components: (ħ/i)[B∘(i/ħ)ℒ]
        entries: 交互项
        order: 报告的耦合阶
    """
    dim, truncation = components.dim, components.truncation
    kinetic, mass_key = BasisKey(DPHI2), BasisKey(PHI2, 1)
    gamma_dot = components.component(kinetic)
    lambda_dot = components.component(mass_key)
    absorbed = components.without([kinetic, mass_key])
    legs = leg_counting(entries, dim, truncation, **flags).scale(gamma_dot).scale(Fraction(1, 2))
    total = (absorbed + legs + scale_derivative(entries, dim, truncation, **flags)
             + mu_derivative(entries, dim, truncation, **flags))
    beta = LagrangianClass({}, dim, truncation, **flags)
    higher = LagrangianClass({}, dim, truncation, **flags)
    for key in total.keys():
        for (h, g), value in total.component(key).items():
            target = FormalSeries.monomial(value, h, g, truncation)
            if g <= order:
                beta = beta + LagrangianClass({key: target}, dim, truncation, **flags)
            else:
                higher = higher + LagrangianClass({key: target}, dim, truncation, **flags)
    logger.debug(f"β = {beta.to_text()}")
    return BetaAssembly(components, gamma_dot, lambda_dot, beta, higher)


def hadamard_leg_term(entries: Sequence[Interaction], gamma_dot: FormalSeries) -> List[Tuple[str, FormalSeries]]:
    """
    (γ̇/2)·2ħ[Γ_{H^μ}ℒ] 的符号记录

    Γ_H 的重合点值不在精确域中，只按单项式记下系数级数
    """
    rows = []
    for e in entries:
        if e.monomial.phi < 2:
            continue
        series = gamma_dot.scale(e.coefficient).shift_coupling(e.coupling).shift_hbar(1)
        if not series.is_zero():
            rows.append((f"Gamma_H({e.monomial.name})", series))
    return rows
