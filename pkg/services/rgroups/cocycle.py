"""
Gell-Mann–Low 余环模块
标度变换下的 Z(ρ)、余环恒等式与 B̂ 函数

主要功能：
1. z_from_smatrices: 两张延拓表之间的 Z
2. gml_cocycle: σ_ρ∘S∘σ_ρ⁻¹ = S∘Z(ρ)，标度共轭表现为延拓偏移加 log ρ × 标度破坏
3. cocycle_check: Z(ρτ) = Z(ρ)∘α⁻¹∘Z(τ)∘α，α = α_{v log ρ²}
4. bhat_function: B̂ = ρ d/dρ Z(ρ)|_{ρ=1} − 2ħΓ_v
5. bhat_relation_check: 两种处方的 B̂ 之差与 Z 的关系

作者: Assistant
创建时间: 2024年
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from services.exact import Atom, ExactScalar
from services.functionals import LocalFunctional
from .smatrix import ExtensionTable, SMatrix
from .zmap import AlphaMap, InductiveZMap, ZMap, gamma_v

logger = logging.getLogger("pqft.rgroups.cocycle")

LOG_RHO = ExactScalar.atom(Atom.LOG_RHO)
LOG_TAU = ExactScalar.atom(Atom.LOG_TAU)


def z_from_smatrices(smatrix, target, order: Optional[int] = None) -> InductiveZMap:
    """Ŝ = S∘Z 的唯一 Z"""
    return InductiveZMap(smatrix, target, order)


def kappa_table(dim: int = 4, log_ratio: Any = None) -> ExtensionTable:
    """参照表的 κ 族：log(κ̂/κ) 默认取原子 LOG_KAPPA"""
    ratio = ExactScalar.atom(Atom.LOG_KAPPA) if log_ratio is None else ExactScalar.coerce(log_ratio)
    return ExtensionTable.reference(dim).shifted(ratio, name="kappa")


def gml_cocycle(table: ExtensionTable, order: int = 2, log_rho: Any = None) -> InductiveZMap:
    """
    Z(ρ)：S 与其标度共轭之间的 Z

    log_rho 为 log ρ 的精确表达式（默认原子 LOG_RHO），log_rho = 0 时 Z(1) = id
    """
    log_rho = LOG_RHO if log_rho is None else ExactScalar.coerce(log_rho)
    smatrix = SMatrix(table, order)
    scaled = SMatrix(table.shifted(log_rho, name=f"σ[{log_rho.to_text()}]"), order)
    return InductiveZMap(smatrix, scaled, order, name=f"Z(ρ)[{log_rho.to_text()}]")


def cocycle_check(table: ExtensionTable, functional: LocalFunctional, order: int = 2) -> bool:
    """Z(ρτ) = Z(ρ)∘α_{v log ρ²}⁻¹∘Z(τ)∘α_{v log ρ²}，在原子 LOG_RHO、LOG_TAU 上精确"""
    z_rho = gml_cocycle(table, order, LOG_RHO)
    z_tau = gml_cocycle(table, order, LOG_TAU)
    z_product = gml_cocycle(table, order, LOG_RHO + LOG_TAU)
    alpha = AlphaMap.for_log(table.dim, LOG_RHO)
    lhs = z_product.apply(functional)
    conjugated = alpha.inverse().apply(z_tau.apply(alpha.apply(functional)))
    rhs = z_rho.apply(conjugated).truncate(order)
    residual = lhs - rhs
    passed = residual.is_zero()
    if passed:
        logger.info(f"✅ Gell-Mann–Low 余环 ({table.name}, 阶 {order})")
    else:
        logger.warning(f"❌ Gell-Mann–Low 余环残差: {residual.to_text()}")
    return passed


@dataclass
class BhatResult:
    """B̂(V) 及其按耦合阶的分量"""
    value: LocalFunctional
    components: Dict[int, LocalFunctional] = field(default_factory=dict)
    scaling_part: Optional[LocalFunctional] = None
    mass_part: Optional[LocalFunctional] = None

    def descriptor(self) -> Dict[str, Any]:
        return {
            "value": self.value.descriptor(),
            "components": {str(n): part.descriptor() for n, part in sorted(self.components.items())},
        }


def scale_derivative(zmap: ZMap, functional: LocalFunctional) -> LocalFunctional:
    """ρ d/dρ Z(ρ)(V)|_{ρ=1}：对 LOG_RHO 求形式导数后令其为零"""
    return zmap.apply(functional).derivative(Atom.LOG_RHO).substitute(Atom.LOG_RHO, ExactScalar.zero())


def bhat_function(table: ExtensionTable, functional: LocalFunctional, order: int = 2) -> BhatResult:
    """
    B̂(V) = ρ d/dρ Z(ρ)(V)|_{ρ=1} − 2ħΓ_v V

    对数求导在原子上精确
    """
    zmap = gml_cocycle(table, order)
    scaling = scale_derivative(zmap, functional)
    mass = gamma_v(functional).scale(2).shift(hbar=1)
    value = scaling - mass
    components = {n: value.filter(lambda t, n=n: t.coupling == n) for n in range(1, order + 1)}
    logger.info(f"B̂({table.name}) = {value.to_text()}")
    return BhatResult(value, components, scaling, mass)


def bhat_relation_check(first: ExtensionTable, second: ExtensionTable,
                        functional: LocalFunctional) -> bool:
    """
    [B̂₁(V)]₂ − [B̂₂(V)]₂ = 4ħ²[Z(Γ_vV)]₂ + 2ħΓ_v[Z(V)]₂，Z 满足 S₁ = S₂∘Z

    V 的每一项耦合阶为 1
    """
    zmap = z_from_smatrices(SMatrix(second, 2), SMatrix(first, 2), 2)
    lhs = (bhat_function(first, functional).components[2]
           - bhat_function(second, functional).components[2])
    shifted = gamma_v(functional)
    rhs = (zmap.component(shifted, 2).scale(4).shift(hbar=2)
           + gamma_v(zmap.component(functional, 2)).scale(2).shift(hbar=1))
    residual = lhs - rhs
    passed = residual.is_zero()
    marker = "✅" if passed else "❌"
    logger.info(f"{marker} B̂ 处方变换关系 ({first.name} / {second.name}): 残差 {residual.to_text()}")
    return passed
