"""
Z 映射模块
重整化群元素 Z：局域泛函到局域泛函的形式映射

主要功能：
1. ZMap 基类：作用、分量、复合、求逆与性质记录
2. InductiveZMap: 由 Ŝ = S∘Z 逐阶归纳，Z_n = [Ŝ(V) − S(Z_{<n}(V))]_n
3. AlphaMap: α_w = exp(ħΓ_w)，重合点的 w 收缩
4. 幺正性条件 Z̄(−V) + Z(V) = 0、ħ 分次审计与支集可加性

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import replace
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from services.common.errors import SeriesConvergenceError
from services.exact import Atom, ExactScalar
from services.functionals import (
    FieldMonomial, LocalFunctional, LocalTerm, SupportRegion, TestFunction,
)
from services.kernels import HadamardEvaluator
from services.products import GraphSum

logger = logging.getLogger("pqft.rgroups.zmap")


class ZMap(ABC):
    """
    局域泛函上的形式映射，截断到耦合阶 order

    输入的每一项耦合阶须 ≥ 1
    """

    def __init__(self, order: int, dim: int = 4, name: str = "Z"):
        self.order = order
        self.dim = dim
        self.name = name
        self.logger = logging.getLogger(f"pqft.rgroups.zmap.{type(self).__name__}")

    @abstractmethod
    def apply(self, functional: LocalFunctional) -> LocalFunctional:
        """Z(V)"""

    def __call__(self, functional: LocalFunctional) -> LocalFunctional:
        return self.apply(functional)

    def component(self, functional: LocalFunctional, n: int) -> LocalFunctional:
        """[Z(V)]_n：耦合阶为 n 的部分，对耦合阶为 1 的 V 即 Z⁽ⁿ⁾(V^{⊗n})/n!"""
        return self.apply(functional).filter(lambda t: t.coupling == n)

    def compose(self, inner: "ZMap") -> "ComposedZMap":
        """self ∘ inner"""
        return ComposedZMap(self, inner)

    def inverse(self, max_iterations: Optional[int] = None) -> "InverseZMap":
        return InverseZMap(self, max_iterations)

    def satisfies(self, functional: LocalFunctional, atom: Optional[Atom] = None) -> Dict[str, Optional[bool]]:
        """
        记录 Z 满足的性质，而不是假定它属于重整化群

        Returns:
            Dict[str, Optional[bool]]: 键为性质名；未检查的性质记为 None（atom 为 None 时的 C7，
            抽象测试函数的支集保持）
        """
        image = self.apply(functional)
        record: Dict[str, Optional[bool]] = {
            "z_of_zero": self.apply(LocalFunctional.zero(self.dim)).is_zero(),
            "first_order_identity": image.filter(lambda t: t.coupling == 1)
                                    == functional.filter(lambda t: t.coupling == 1),
            "identity_plus_O_hbar": hbar_audit(image - functional, functional),
            "support_preserved": support_preserved(functional, image),
            "C5_unitarity": z_unitarity_condition(self, functional),
            "C6_poincare": True,
            "C7_almost_scaling": c7_audit(self, functional, atom) if atom is not None else None,
        }
        failed = [key for key, value in record.items() if value is False]
        marker = "✅" if not failed else "❌"
        self.logger.info(f"{marker} {self.name} 性质记录: 未满足 {failed or '无'}")
        return record

    def descriptor(self, functional: LocalFunctional) -> List[Dict[str, Any]]:
        """序列化: (n, 输入基, 输出局域项列表)"""
        inputs = sorted({t.monomial.name for t in functional.terms})
        rows = []
        for n in range(1, self.order + 1):
            part = self.component(functional, n)
            rows.append({
                "n": n,
                "input": inputs,
                "output": part.descriptor(),
            })
        return rows

    def _check_input(self, functional: LocalFunctional) -> None:
        if any(t.coupling < 1 for t in functional.terms):
            raise ValueError(f"{self.name} 的输入项耦合阶必须 ≥ 1: {functional.to_text()}")


class IdentityZMap(ZMap):

    def __init__(self, order: int, dim: int = 4):
        super().__init__(order, dim, "id")

    def apply(self, functional: LocalFunctional) -> LocalFunctional:
        return functional.truncate(self.order)


class InductiveZMap(ZMap):
    """
    Ŝ = S∘Z 的唯一解

    target 为任意返回 GraphSum 的 S 矩阵（含 S∘Z′ 的复合）；每阶残差必须局域化，
    否则抛出 NonLocalResidueError
    """

    def __init__(self, smatrix, target, order: Optional[int] = None, name: Optional[str] = None):
        order = order if order is not None else min(smatrix.order, target.order)
        super().__init__(order, smatrix.dim, name or f"Z[{smatrix.name}→{target.name}]")
        self.smatrix = smatrix
        self.target = target
        self._cache: Dict[LocalFunctional, LocalFunctional] = {}

    def apply(self, functional: LocalFunctional) -> LocalFunctional:
        self._check_input(functional)
        if functional in self._cache:
            return self._cache[functional]
        wanted = self.target(functional)
        result = LocalFunctional((), self.dim, functional.test_functions)
        for n in range(1, self.order + 1):
            residual: GraphSum = (wanted - self.smatrix(result)).coupling_part(n)
            piece = residual.to_local(n)
            self.logger.debug(f"{self.name} 第 {n} 阶: {piece.to_text()}")
            result = result + piece
        self._cache[functional] = result
        return result


class ComposedZMap(ZMap):
    """outer ∘ inner"""

    def __init__(self, outer: ZMap, inner: ZMap):
        super().__init__(min(outer.order, inner.order), outer.dim, f"{outer.name}∘{inner.name}")
        self.outer = outer
        self.inner = inner

    def apply(self, functional: LocalFunctional) -> LocalFunctional:
        return self.outer.apply(self.inner.apply(functional)).truncate(self.order)


class InverseZMap(ZMap):
    """
    Z⁻¹ 的不动点迭代 W ← V − (Z(W) − W)

    Z − id 在耦合阶或 ħ 阶上严格升高，迭代有限步稳定
    """

    def __init__(self, base: ZMap, max_iterations: Optional[int] = None):
        super().__init__(base.order, base.dim, f"{base.name}⁻¹")
        self.base = base
        self.max_iterations = max_iterations or 4 * (base.order + 2)

    def apply(self, functional: LocalFunctional) -> LocalFunctional:
        current = functional.truncate(self.order)
        for _ in range(self.max_iterations):
            image = self.base.apply(current)
            following = (functional - (image - current)).truncate(self.order)
            if following == current:
                return current
            current = following
        residual = (self.base.apply(current) - functional).truncate(self.order)
        raise SeriesConvergenceError(self.max_iterations, residual.to_text())


class AlphaMap(ZMap):
    """
    α_w = exp(ħΓ_w)，w 为重合点常数（不含 m² 幂）

    φ^a_n ↦ Σ_j (ħw/2)^j/j! φ^{a−2j}_n，每次收缩带 (m²)^{d/2−1}；导数腿不参与收缩
    """

    def __init__(self, weight: ExactScalar, dim: int = 4, order: int = 8, name: Optional[str] = None):
        weight = ExactScalar.coerce(weight)
        super().__init__(order, dim, name or f"α[{weight.to_text()}]")
        if dim % 2:
            raise ValueError(f"α_w 需要偶数维: {dim}")
        self.weight = weight
        self.mass_step = dim // 2 - 1

    @classmethod
    def for_log(cls, dim: int, log_expr: Any, sign: int = 1) -> "AlphaMap":
        """α_{±v log ρ²}，log_expr 为 log ρ 的精确表达式"""
        weight = HadamardEvaluator.v_coefficient(dim) * ExactScalar.coerce(log_expr) * (2 * sign)
        return cls(weight, dim)

    def inverse(self, max_iterations: Optional[int] = None) -> "AlphaMap":
        return AlphaMap(-self.weight, self.dim, self.order)

    def apply(self, functional: LocalFunctional) -> LocalFunctional:
        terms: List[LocalTerm] = []
        half = self.weight * Fraction(1, 2)
        for term in functional.terms:
            a = term.monomial.phi
            for j in range(a // 2 + 1):
                factor = half ** j * Fraction(1, math.factorial(j))
                terms.append(replace(term, monomial=FieldMonomial(a - 2 * j, term.monomial.deriv),
                                     coefficient=term.coefficient * factor,
                                     hbar=term.hbar + j, mass=term.mass + j * self.mass_step))
        return functional.with_terms(terms)

    def laplacian(self, functional: LocalFunctional) -> LocalFunctional:
        """Γ_w（不带 ħ）：φ^a_n ↦ (w/2)φ^{a−2}_n"""
        terms = [replace(t, monomial=FieldMonomial(t.monomial.phi - 2, t.monomial.deriv),
                         coefficient=t.coefficient * self.weight * Fraction(1, 2),
                         mass=t.mass + self.mass_step)
                 for t in functional.terms if t.monomial.phi >= 2]
        return functional.with_terms(terms)


def gamma_v(functional: LocalFunctional) -> LocalFunctional:
    """Γ_v，v 为重合点的 Hadamard 系数"""
    return AlphaMap(HadamardEvaluator.v_coefficient(functional.dim), functional.dim).laplacian(functional)


# ----------------------------------------------------------------------
# 性质检查
# ----------------------------------------------------------------------

def _hbar_per_coupling(functional: LocalFunctional) -> int:
    """V 每个耦合阶携带的 ħ 幂（取耦合阶 1 的项中的最小值）"""
    values = [t.hbar for t in functional.terms if t.coupling == 1]
    return min(values) if values else 0


def relative_hbar(term: LocalTerm, per_coupling: int) -> int:
    """ħ 相对于 V^{coupling} 自身的阶数"""
    return term.hbar - term.coupling * per_coupling


def hbar_audit(difference: LocalFunctional, functional: LocalFunctional, minimum: int = 1) -> bool:
    """difference 的每一项相对 ħ 阶 ≥ minimum"""
    per = _hbar_per_coupling(functional)
    return all(relative_hbar(t, per) >= minimum for t in difference.terms)


def atom_degree(value: ExactScalar, atom: Atom) -> int:
    degree = 0
    while True:
        value = value.derivative(atom)
        if value.is_zero():
            return degree
        degree += 1


def c7_audit(zmap: ZMap, functional: LocalFunctional, atom: Atom) -> bool:
    """
    (ρ d/dρ)ⁿ Z(ρ) = O(ħⁿ⁺¹)：含 log^ℓ ρ 的项相对 ħ 阶 ≥ ℓ+1
    """
    per = _hbar_per_coupling(functional)
    difference = zmap.apply(functional) - functional
    failures = [t.text() for t in difference.terms
                if relative_hbar(t, per) < atom_degree(t.coefficient, atom) + 1]
    if failures:
        logger.warning(f"❌ C7 审计 {zmap.name}: {failures[:3]}")
    else:
        logger.info(f"✅ C7 审计 {zmap.name}")
    return not failures


def z_unitarity_condition(zmap: ZMap, functional: LocalFunctional) -> bool:
    """Z̄(−V) + Z(V) = 0，Z̄(V) = Z(V*)*"""
    mirrored = zmap.apply(functional.scale(-1).conj()).conj()
    residual = mirrored + zmap.apply(functional)
    passed = residual.is_zero()
    if not passed:
        logger.debug(f"Z 幺正性残差 {zmap.name}: {residual.to_text()}")
    return passed


def _concrete(functional: LocalFunctional) -> bool:
    return all(not tf.region.is_empty() for tf in functional.test_functions.values())


def support_preserved(functional: LocalFunctional, image: LocalFunctional) -> Optional[bool]:
    """supp Z(V) ⊆ supp V；抽象测试函数没有可比较的支集，记为 None"""
    if not _concrete(functional) or not _concrete(image):
        return None
    outer = functional.support()
    return all(image.term_support(t).subset_of(outer) for t in image.terms)


def z_additivity_check(zmap: ZMap, build: Callable[[TestFunction], LocalFunctional],
                       regions: Sequence[SupportRegion]) -> bool:
    """
    Z(F+G+H) = Z(F+G) − Z(G) + Z(G+H)，对所有 supp F ∩ supp H = ∅ 的三元组

    Args:
        zmap: 待检查的映射
        build: 由测试函数构造相互作用
        regions: 支集单元（通常来自支集分解的覆盖）
    """
    pieces = [build(TestFunction(f"cell{index}", region)) for index, region in enumerate(regions)]
    checked = 0
    for i, j, k in itertools.permutations(range(len(regions)), 3):
        if i > k or regions[i].intersects(regions[k]):
            continue
        f, g, h = pieces[i], pieces[j], pieces[k]
        lhs = zmap.apply(f + g + h)
        rhs = zmap.apply(f + g) - zmap.apply(g) + zmap.apply(g + h)
        checked += 1
        if lhs != rhs:
            logger.warning(f"❌ Z 可加性失败: ({i},{j},{k}) 残差 {(lhs - rhs).to_text()}")
            return False
    logger.info(f"✅ Z 可加性: {checked} 个三元组")
    return True
