"""
φ⁴ 模型 (d=4) 模块
四维 φ⁴ 理论的二阶 B 函数、β 函数与一致性检查

主要功能：
1. phi4_d4_B: gφ⁴ + a·m²φ² + b·(∂φ)² 的 [½B⁽²⁾(ℒ⊗ℒ)]，含鱼图、日落图与导数通道
2. phi4_d4_beta: 吸收后的 (ħ/i)β((ig/ħ)[φ⁴])
3. fish_consistency: 鱼图系数的三种算法（c_k、显式对数延拓、欧氏数值检验）
4. phi4_d4_report: 带回归检查、τ 依赖与高阶附加项的完整报告

作者: Assistant
创建时间: 2024年
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from services.exact import Atom, ExactScalar
from services.functionals import DPHI2, PHI2, PHI4, BasisKey, LagrangianClass
from services.renorm import c_k, euclidean_scaling_oracle, explicit_extension, standard_channel
from .bfunction import (
    BetaAssembly, Interaction, assemble_beta, hadamard_leg_term, pair_classes, second_order_B,
    tilde,
)
from .report import BetaReport, CheckResult, class_rows, scalar_entry

logger = logging.getLogger("pqft.models.phi4_d4")

DIM = 4
MASS_KEY = BasisKey(PHI2, 1)

# D_F² = 1/(16π⁴u²)，两条等价边的对称因子 1/2!
_FISH_PREFACTOR = ExactScalar.term(Fraction(1, 32), pi_power=-4)


def phi4_entries(a: Any = 0, b: Any = 0) -> List[Interaction]:
    """gφ⁴ 加上可选的 a·m²φ² 与 b·(∂φ)²，三者耦合阶均为 1"""
    entries = [Interaction(PHI4)]
    a, b = ExactScalar.coerce(a), ExactScalar.coerce(b)
    if not a.is_zero():
        entries.append(Interaction(PHI2, a, coupling=1, mass=1))
    if not b.is_zero():
        entries.append(Interaction(DPHI2, b, coupling=1))
    return entries


def phi4_channels() -> Dict[str, ExactScalar]:
    """B 中出现的全部通道系数"""
    return {
        "fish": standard_channel("fish_d4").coefficient(0, 0),
        "sunset_box": standard_channel("sunset_d4").coefficient(1, 0),
        "sunset_mass": standard_channel("sunset_d4_mass").coefficient(0, 1),
        "b1": standard_channel("derivative_d4_mass").coefficient(0, 1),
        "derivative_box": standard_channel("derivative_d4").coefficient(1, 0),
    }


def phi4_d4_B(a: Any = 0, b: Any = 0) -> Tuple[LagrangianClass, Dict[str, ExactScalar]]:
    """
    [½B⁽²⁾((gφ⁴ + a m²φ² + b(∂φ)²)⊗²)]，显示单位

    Returns:
        (LagrangianClass, Dict[str, ExactScalar]): 类与通道系数
    """
    display = second_order_B(DIM, phi4_entries(a, b))
    logger.info(f"[B⁽²⁾∘ℒ] = {display.to_text()}")
    return display, phi4_channels()


def phi4_d4_assembly(a: Any = 0, b: Any = 0) -> BetaAssembly:
    display, _ = phi4_d4_B(a, b)
    return assemble_beta(tilde(display), phi4_entries(a, b), 2)


def phi4_d4_beta(a: Any = 0, b: Any = 0) -> LagrangianClass:
    """(ħ/i)β((ig/ħ)[φ⁴])，耦合阶 ≤ 2"""
    return phi4_d4_assembly(a, b).beta


def expected_sunset_mass() -> ExactScalar:
    """−i/(2⁸π⁴)·(1 + 2log μ − 2log τ) − iF0/(2⁴π²)"""
    logs = (ExactScalar.one() + ExactScalar.atom(Atom.LOG_MU) * 2
            - ExactScalar.atom(Atom.LOG_TAU) * 2)
    return (ExactScalar.term(Fraction(-1, 256), 1, -4) * logs
            + ExactScalar.term(Fraction(-1, 16), 1, -2) * ExactScalar.atom(Atom.F0))


def fish_consistency(tolerance: float = 1e-6) -> List[CheckResult]:
    """
    鱼图系数的三种算法

    (i) c₀ 闭式乘 D_F²/2 的前因子；(ii) 显式对数延拓对 log ρ 求导；
    (iii) 欧氏 s=0 类比的数值标度破坏与 |S³| = 2π²
    """
    fish = standard_channel("fish_d4").coefficient(0, 0)
    closed = c_k(DIM, DIM - 1, 0)
    checks = [
        CheckResult.compare("fish_c_k", closed * _FISH_PREFACTOR, fish),
        CheckResult.compare("fish_explicit_extension", closed, explicit_extension(DIM).scaling_violation()),
    ]
    euclidean = float(c_k(DIM, 0, 0).evaluate().real)
    numeric = euclidean_scaling_oracle(DIM, profile="gaussian", tolerance=tolerance)
    checks.append(CheckResult.within("fish_euclidean_oracle", euclidean, numeric, tolerance))
    return checks


def _higher_order_rows(assembly: BetaAssembly) -> List[Dict[str, Any]]:
    rows = class_rows(assembly.higher_order)
    for name, series in hadamard_leg_term(phi4_entries(), assembly.gamma_dot):
        rows.extend({"basis": name, "hbar": h, "coupling": g, **scalar_entry(value)}
                    for (h, g), value in series.items())
    return rows


def phi4_d4_report(tolerance: float = 1e-6) -> BetaReport:
    """φ⁴ (d=4) 的完整报告"""
    display, channels = phi4_d4_B()
    assembly = assemble_beta(tilde(display), phi4_entries(), 2)
    report = BetaReport(
        model="phi4_d4",
        order=2,
        components=assembly.components,
        gamma_dot=assembly.gamma_dot,
        lambda_dot=assembly.lambda_dot,
        beta=assembly.beta,
        higher_order=_higher_order_rows(assembly),
        channels=channels,
        notes={
            "fish": "D_F²/2 的 δ 系数，D_F = −1/(4π²u)",
            "b1": "∂D_F·∂D_F 的梯度收缩，m² 阶",
            "sunset_box": "D_F³/3! 的 □δ 系数",
            "sunset_mass": "D_F³/3! 的 m² 阶，由 τ 参数化显式延拓固定 μ 依赖，F0 保持符号",
            "derivative_box": "φ⁴⊗(∂φ)² 通道的 □δ，只产生全导数，不进入类",
            "higher_order": "(γ̇/2)⟨ℒ⁽¹⁾,φ⟩ 的 g³ 项与 Γ_H 记录，不参与验收比较",
            "tau_shift": "m²[φ²] 系数对 log τ 的导数为 +i/(2⁷π⁴)，即 log(τ₂²/τ₁²) 的系数 +i/(2⁸π⁴)",
        },
        extras={"display": class_rows(display)},
    )
    pi2, pi4 = -2, -4
    report.add_check(CheckResult.compare("fish", ExactScalar.term(Fraction(-1, 16), 1, pi2), channels["fish"]))
    report.add_check(CheckResult.compare("b1", ExactScalar.term(Fraction(-1, 8), 1, pi2), channels["b1"]))
    report.add_check(CheckResult.compare(
        "sunset_box", ExactScalar.term(Fraction(1, 1536), 1, pi4), channels["sunset_box"]))
    report.add_check(CheckResult.compare("sunset_mass", expected_sunset_mass(), channels["sunset_mass"]))
    report.add_check(CheckResult.compare(
        "display_phi4", ExactScalar.term(Fraction(-3, 16), 1, pi2), display.coefficient(PHI4, 2, 2)))
    report.add_check(CheckResult.compare(
        "display_dphi2", ExactScalar.term(Fraction(-1, 1536), 1, pi4), display.coefficient(DPHI2, 3, 2)))
    report.add_check(CheckResult.compare(
        "beta_phi4", ExactScalar.term(Fraction(3, 16), 0, pi2), assembly.beta.coefficient(PHI4, 1, 2)))
    report.add_check(CheckResult.compare(
        "beta_mass", ExactScalar.term(Fraction(-1, 16), 0, pi2), assembly.beta.coefficient(MASS_KEY, 1, 1)))

    names = sorted(key.name for key in assembly.beta.keys())
    report.add_check(CheckResult.flag("beta_closure", names == sorted([PHI4.name, MASS_KEY.name]),
                                      f"β 的基: {names}"))
    massless = [key.name for key in assembly.beta.keys() if key.mass == 0]
    report.add_check(CheckResult.flag("massless_flow", massless == [PHI4.name], f"m=0 的基: {massless}"))
    atoms = set()
    for key in assembly.beta.keys():
        for _, value in assembly.beta.component(key).items():
            atoms |= value.free_atoms()
    report.add_check(CheckResult.flag("beta_scheme_free", not atoms & {Atom.F0, Atom.LOG_TAU},
                                      f"β 中的符号: {sorted(a.value for a in atoms)}"))

    tau_slope = display.coefficient(MASS_KEY, 3, 2).derivative(Atom.LOG_TAU)
    report.add_check(CheckResult.compare("tau_shift", ExactScalar.term(Fraction(1, 128), 1, pi4), tau_slope))

    mixed = pair_classes(DIM, Interaction(PHI4), Interaction(DPHI2))
    mixed_names = [key.name for key in mixed.keys()]
    report.add_check(CheckResult.flag("total_derivative_dropped", mixed_names == [MASS_KEY.name],
                                      f"φ⁴⊗(∂φ)² 的基: {mixed_names}"))
    with_a, _ = phi4_d4_B(a=1)
    report.add_check(CheckResult.compare(
        "mass_insertion", ExactScalar.term(Fraction(-1, 16), 1, pi2), with_a.coefficient(MASS_KEY, 2, 2)))
    with_b, _ = phi4_d4_B(b=1)
    report.add_check(CheckResult.compare(
        "derivative_insertion", ExactScalar.term(Fraction(-1, 8), 1, pi2), with_b.coefficient(MASS_KEY, 2, 2)))

    report.add_check(CheckResult.compare(
        "higher_order_legs", ExactScalar.term(Fraction(1, 768), 0, pi4),
        assembly.higher_order.coefficient(PHI4, 2, 3)))
    for check in fish_consistency(tolerance):
        report.add_check(check)
    return report
