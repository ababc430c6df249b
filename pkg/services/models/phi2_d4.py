"""
φ² 模型 (d=4) 示例模块
V = (ig/ħ)∫fφ² 的 Gell-Mann–Low 余环、α 映射与 B̂ 函数

主要功能：
1. phi2_d4_example: 三个显式结果 Z(ρ)(V)、α_{−v log ρ²}(V)、B̂(V) 及其回归检查
2. 余环恒等式与 κ 族之间的 B̂ 变换关系

作者: Assistant
创建时间: 2024年
"""

import logging
from fractions import Fraction
from typing import Dict

from services.exact import Atom, ExactScalar
from services.functionals import ONE, LocalFunctional, LocalTerm, Smearing, TestFunction
from services.rgroups import (
    LOG_RHO, AlphaMap, ExtensionTable, bhat_function, bhat_relation_check, cocycle_check,
    exact_log_slope, fish_interaction, gml_cocycle, kappa_table,
)
from .report import CheckResult, ExampleReport

logger = logging.getLogger("pqft.models.phi2_d4")

DIM = 4


def _constant_term(coefficient: ExactScalar, slots, coupling: int, mass: int = 0) -> LocalTerm:
    return LocalTerm(ONE, coefficient, Smearing(tuple(slots)), 0, coupling, mass)


def expected_displays(f: TestFunction) -> Dict[str, LocalFunctional]:
    """
    g=1 时的三个显式结果

    Z(ρ)(V) = V + (ig²/8π²)·log ρ·∫f²
    α_{−v log ρ²}(V) = V − (igm²/16π²)·log ρ²·∫f
    B̂(V) = i∫(−(gm²/8π²)f + (g²/8π²)f²)
    """
    V = fish_interaction(f, dim=DIM)
    functions = {f.name: f}
    slope = ExactScalar.term(Fraction(1, 8), 1, -2)
    mass = ExactScalar.term(Fraction(-1, 8), 1, -2)
    z_rho = V + LocalFunctional([_constant_term(slope * LOG_RHO, (f.name, f.name), 2)], DIM, functions)
    alpha = V + LocalFunctional([_constant_term(mass * LOG_RHO, (f.name,), 1, 1)], DIM, functions)
    bhat = LocalFunctional([_constant_term(mass, (f.name,), 1, 1),
                            _constant_term(slope, (f.name, f.name), 2)], DIM, functions)
    return {"z_rho": z_rho, "alpha": alpha, "bhat": bhat}


def phi2_d4_example(order: int = 2) -> ExampleReport:
    """
    φ² 模型的打包回归

    Args:
        order: 截断阶，示例只在 2 阶给出显式结果

    Returns:
        ExampleReport: 三个显式结果、检查与 Z(ρ) 的性质记录
    """
    f = TestFunction("f")
    V = fish_interaction(f, dim=DIM)
    reference = ExtensionTable.reference(DIM)
    z_rho = gml_cocycle(reference, order)
    displays = {
        "z_rho": z_rho.apply(V),
        "alpha": AlphaMap.for_log(DIM, LOG_RHO, sign=-1).apply(V),
        "bhat": bhat_function(reference, V, order).value,
    }
    report = ExampleReport(
        model="phi2_d4_example",
        order=order,
        interaction=V,
        displays=displays,
        notes={
            "z_rho": "参照延拓表与其标度共轭之间的 Z，log ρ 保持为符号",
            "alpha": "α_{−v log ρ²}，v 的重合点值 m²/(2⁴π²)",
            "bhat": "ρ d/dρ Z(ρ)(V)|_{ρ=1} − 2ħΓ_v V",
        },
    )
    expected = expected_displays(f)
    for name in ("z_rho", "alpha", "bhat"):
        report.add_check(CheckResult.same(name, expected[name], displays[name]))
    report.add_check(CheckResult.compare("log_slope", ExactScalar.term(Fraction(1, 8), 1, -2), exact_log_slope(DIM)))
    report.add_check(CheckResult.flag("cocycle", cocycle_check(reference, V, order), "Z(ρτ) 余环恒等式"))
    report.add_check(CheckResult.flag("bhat_relation", bhat_relation_check(kappa_table(DIM), reference, V),
                                      "κ 族与参照表之间的 B̂ 变换关系"))
    properties = z_rho.satisfies(V, atom=Atom.LOG_RHO)
    report.extras["properties"] = {key: value for key, value in properties.items()}
    return report
