"""
φ³ 模型 (d=6) 模块
六维 φ³ 理论的 B 函数与 β 函数

主要功能：
1. phi3_d6_B: 二阶鱼图通道 (a₀□δ + a₁m²δ) 与三阶三角图 (a₂δ) 的 [B∘gφ³]
2. phi3_d6_beta: 吸收波函数与质量重整化后的 β
3. phi3_d6_report: 带回归检查的完整报告

交互取归一化单项式 gφ³/3!，线性项 [φ] 不进入类

作者: Assistant
创建时间: 2024年
"""

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from services.exact import ExactScalar
from services.functionals import PHI3, LagrangianClass
from services.renorm import standard_channel
from .bfunction import Interaction, assemble_beta, second_order_B, tilde, triangle_B
from .report import BetaReport, CheckResult, class_rows

logger = logging.getLogger("pqft.models.phi3_d6")

DIM = 6
FLAGS = {"ignore_linear": True}


def phi3_entries(coupling: ExactScalar = None) -> List[Interaction]:
    coefficient = ExactScalar.one() if coupling is None else ExactScalar.coerce(coupling)
    return [Interaction(PHI3, coefficient)]


def phi3_d6_B(order: int = 3, tolerance: float = 1e-8,
              coupling: ExactScalar = None) -> Tuple[LagrangianClass, Dict[str, ExactScalar]]:
    """
    [½B⁽²⁾(ℒ⊗ℒ)] + [B⁽³⁾(ℒ⊗ℒ⊗ℒ)/3!]，显示单位（不含 i/ħ）

    Args:
        order: 2 或 3
        tolerance: 三角图参数积分的求积容差
        coupling: 交互系数，默认 1

    Returns:
        (LagrangianClass, Dict[str, ExactScalar]): 类与通道系数 a₀、a₁、a₂

    Raises:
        ValueError: order 不在 {2, 3}
    """
    if order not in (2, 3):
        raise ValueError(f"φ³ (d=6) 只支持阶 2 或 3: {order}")
    entries = phi3_entries(coupling)
    display = second_order_B(DIM, entries, **FLAGS)
    channels = {
        "a0": standard_channel("fish_d6").coefficient(1, 0),
        "a1": standard_channel("fish_d6_mass").coefficient(0, 1),
    }
    if order == 3:
        triangle, a2 = triangle_B(DIM, entries, tolerance, **FLAGS)
        display = display + triangle
        channels["a2"] = a2
    logger.info(f"[B∘gφ³] = {display.to_text()}")
    return display, channels


def phi3_d6_beta(tolerance: float = 1e-8) -> LagrangianClass:
    """(ħ/i)β((i/ħ)g[φ³]/3!)"""
    display, _ = phi3_d6_B(3, tolerance)
    return assemble_beta(tilde(display), phi3_entries(), 3, **FLAGS).beta


def phi3_d6_report(tolerance: float = 1e-8) -> BetaReport:
    """φ³ (d=6) 的完整报告，附带全部回归检查"""
    entries = phi3_entries()
    display, channels = phi3_d6_B(3, tolerance)
    assembly = assemble_beta(tilde(display), entries, 3, **FLAGS)
    report = BetaReport(
        model="phi3_d6",
        order=3,
        components=assembly.components,
        gamma_dot=assembly.gamma_dot,
        lambda_dot=assembly.lambda_dot,
        beta=assembly.beta,
        channels=channels,
        notes={
            "a0": "D_F²/2 在 d=6 的 □δ 系数（c₁）",
            "a1": "D_F²/2 的 m² 展开项，δ 系数（c₀）",
            "a2": "三角图 Feynman 参数约化，I = 1/2",
            "beta": "B̃ − γ̇[(∂φ)²] − λ̇m²[φ²] + (γ̇/2)⟨ℒ⁽¹⁾,φ⟩；[φ] 项不计入",
        },
        extras={"display": class_rows(display)},
    )
    pi3 = -3
    report.add_check(CheckResult.compare("a0", ExactScalar.term(Fraction(1, 384), 1, pi3), channels["a0"]))
    report.add_check(CheckResult.compare("a1", ExactScalar.term(Fraction(1, 64), 1, pi3), channels["a1"]))
    report.add_check(CheckResult.compare("a2", ExactScalar.term(Fraction(1, 64), 0, pi3), channels["a2"]))
    report.add_check(CheckResult.compare(
        "gamma_dot", ExactScalar.term(Fraction(1, 384), 0, pi3), assembly.gamma_dot.coefficient(1, 2)))
    report.add_check(CheckResult.compare(
        "beta_phi3", ExactScalar.term(Fraction(-3, 256), 0, pi3), assembly.beta.coefficient(PHI3, 1, 3)))
    names = sorted(key.name for key in assembly.beta.keys())
    report.add_check(CheckResult.flag("beta_closure", names == [PHI3.name], f"β 的基: {names}"))
    grading = [h for key in assembly.beta.keys() for (h, _), _ in assembly.beta.component(key).items()]
    report.add_check(CheckResult.flag("hbar_grading", bool(grading) and min(grading) >= 1,
                                      f"β 的 ħ 幂: {sorted(set(grading))}"))
    free = assemble_beta(tilde(phi3_d6_B(2, tolerance, coupling=0)[0]), phi3_entries(0), 3, **FLAGS)
    report.add_check(CheckResult.flag("zero_coupling", free.beta.is_zero(), f"g=0: {free.beta.to_text()}"))
    return report
