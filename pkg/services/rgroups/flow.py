"""
流方程模块
有效势 V_Λ = S_Λ⁻¹∘S(V) 及 Wilson–Polchinski 方程的图级检查

主要功能：
1. flow_effective_potential: V_Λ = log_{·_Λ}(exp_{·_{T_H}}(V))
2. flow_equation_residual: d/dΛ V_Λ + ½ dM_Λ/dΛ(V_Λ, V_Λ)，应为空图和
3. 参照路径：正则化乘积与 α_Λ∘(·)∘α_Λ⁻¹ 逐图一致

作者: Assistant
创建时间: 2024年
"""

import logging
from fractions import Fraction
from typing import Optional, Union

from services.functionals import LocalFunctional
from services.products import (
    GraphSum, dM_dLambda, differentiate_cutoff, exp_product, log_product, reference_product,
    regularized_options, regularized_product, timeordered_hadamard,
)

logger = logging.getLogger("pqft.rgroups.flow")

Functional = Union[LocalFunctional, GraphSum]


def _graphs(functional: Functional) -> GraphSum:
    return functional if isinstance(functional, GraphSum) else GraphSum.from_local(functional)


def flow_effective_potential(functional: Functional, order: int = 2, family: str = "shifted",
                             cutoff: Optional[Fraction] = None) -> GraphSum:
    """
    V_Λ 的图表示，耦合阶 ≤ order

    Λ 为 None 时保持抽象截断；Λ = 0 时 h_0 = 0，V_0 = log(exp_{T_H}(V)) 只剩逐点对数
    """
    graphs = _graphs(functional)
    full = exp_product(graphs, lambda a, b: timeordered_hadamard(a, b, coupling_max=order), order)
    regularized = lambda a, b: regularized_product(a, b, family=family, cutoff=cutoff,
                                                   coupling_max=order)
    result = log_product(full, regularized, order).truncate(coupling_max=order)
    logger.debug(f"V_Λ ({family}, Λ={cutoff}, 阶 {order}): {len(result)} 个图")
    return result


def flow_equation_residual(functional: Functional, order: int = 2, family: str = "shifted",
                           cutoff: Optional[Fraction] = None) -> GraphSum:
    """d/dΛ V_Λ + ½ (dM_{T_Λ}/dΛ)(V_Λ ⊗ V_Λ)，截断到耦合阶 order"""
    potential = flow_effective_potential(functional, order, family, cutoff)
    lhs = differentiate_cutoff(potential)
    rhs = dM_dLambda(potential, potential, family=family, cutoff=cutoff, coupling_max=order)
    residual = (lhs + rhs.scale(Fraction(1, 2))).truncate(coupling_max=order)
    marker = "✅" if residual.is_zero() else "❌"
    logger.info(f"{marker} 流方程残差 (阶 {order}, {family}): {len(residual)} 个图")
    return residual


def second_order_difference(functional: Functional, family: str = "shifted",
                            cutoff: Optional[Fraction] = None) -> GraphSum:
    """½(M_{T_H} − M_{T_Λ})(V⊗V)"""
    graphs = _graphs(functional)
    ordered = timeordered_hadamard(graphs, graphs, coupling_max=2)
    regularized = regularized_product(graphs, graphs, family=family, cutoff=cutoff, coupling_max=2)
    return (ordered - regularized).scale(Fraction(1, 2)).coupling_part(2)


def regularized_reference_check(first: Functional, second: Functional, family: str = "shifted",
                                cutoff: Optional[Fraction] = None, hbar_max: int = 3) -> bool:
    """F ·_Λ G 与参照路径 α_Λ(α_Λ⁻¹F · α_Λ⁻¹G) 在 ħ ≤ hbar_max 逐图一致"""
    left, right = _graphs(first), _graphs(second)
    option = regularized_options(family, cutoff, left.dim)[0]
    direct = regularized_product(left, right, family=family, cutoff=cutoff, hbar_max=hbar_max)
    reference = reference_product(left, right, option, hbar_max=hbar_max)
    residual = direct - reference
    passed = residual.is_zero()
    marker = "✅" if passed else "❌"
    logger.info(f"{marker} 正则化乘积参照路径 (ħ ≤ {hbar_max}): 剩余 {len(residual)} 个图")
    return passed


def flow_reference_residual(functional: Functional, order: int = 3, family: str = "shifted",
                            cutoff: Optional[Fraction] = None, hbar_max: int = 3) -> GraphSum:
    """
    用参照路径乘积重算 V_Λ 并与交叉枚举结果比较（ħ ≤ hbar_max）

    中间截断要求 V 的顶点 ħ 幂非负，否则后续乘积会把 ħ 阶降回截断之下
    """
    graphs = _graphs(functional)
    if any(v.hbar < 0 for g in graphs.graphs() for v in g.vertices):
        raise ValueError("参照路径的 ħ 截断要求顶点 ħ 幂非负")
    option = regularized_options(family, cutoff, graphs.dim)[0]
    full = exp_product(graphs, lambda a, b: timeordered_hadamard(a, b, coupling_max=order,
                                                                 hbar_max=hbar_max), order)
    reference = log_product(full, lambda a, b: reference_product(a, b, option, hbar_max=hbar_max)
                            .truncate(coupling_max=order), order)
    direct = flow_effective_potential(functional, order, family, cutoff)
    return (direct.truncate(hbar_max=hbar_max) - reference.truncate(hbar_max=hbar_max, coupling_max=order))
