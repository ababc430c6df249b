"""
乘积性质检查模块

主要功能：
1. 因果分解: A 晚于 B 时 T(A·B) = A ⋆ B
2. Dyson–Schwinger 方程: F ·_T φ(Pf) = F·φ(Pf) + iħ⟨F⁽¹⁾, f⟩
3. 结合律、共轭与对易子

作者: Assistant
创建时间: 2024年
"""

import logging
from typing import Optional

from services.common.errors import SupportPreconditionError
from services.exact import ExactScalar
from services.functionals import LEG_TYPES, PHI, PLAIN, LocalFunctional, TestFunction
from services.kernels import KernelKind, KernelTag
from .contraction import Product, expand_edges, pointwise, star, strip_labels, timeordered
from .graph import Edge, GraphSum, constant_vertex

logger = logging.getLogger("pqft.products.checks")


def _report(name: str, passed: bool, residual: Optional[GraphSum] = None) -> bool:
    if passed:
        logger.info(f"✅ {name}")
    else:
        logger.warning(f"❌ {name}: 剩余 {len(residual) if residual is not None else '?'} 个图")
        if residual is not None:
            for line in residual.dump()[:10]:
                logger.debug(f"   {line}")
    return passed


def require_causally_later(first: GraphSum, second: GraphSum) -> None:
    """
    first 的每个顶点都不在 second 任何顶点的因果过去中

    Raises:
        SupportPreconditionError: 支集未知或不满足晚于关系
    """
    for graph, _ in first.items():
        for va in graph.vertices:
            for other, _ in second.items():
                for vb in other.vertices:
                    if va.region is None or vb.region is None:
                        raise SupportPreconditionError("因果分解需要具体支集", relation="later")
                    if not va.region.later_than(vb.region):
                        raise SupportPreconditionError(
                            f"支集不满足晚于关系: {va.region.descriptor()} / {vb.region.descriptor()}",
                            relation="later")


def vanishes_in_retarded_basis(difference: GraphSum) -> bool:
    """展开到推迟/超前基并按支集剪枝后为零"""
    return expand_edges(strip_labels(difference)).is_zero()


def causal_factorization_check(first: GraphSum, second: GraphSum, hbar_max: Optional[int] = None) -> bool:
    """
    A 晚于 B 时 A ·_T B − A ⋆ B 在推迟/超前基中为零

    Raises:
        SupportPreconditionError: 前提不成立
    """
    require_causally_later(first, second)
    difference = timeordered(first, second, hbar_max=hbar_max) - star(first, second, hbar_max=hbar_max)
    residual = expand_edges(strip_labels(difference))
    return _report("因果分解 T(A·B) = A⋆B", residual.is_zero(), residual)


def derivative_pairing(functional: GraphSum, test_function: TestFunction) -> GraphSum:
    """⟨F⁽¹⁾, f⟩：逐腿移除一个场并与 f 以 δ 相连"""
    result = functional.empty_like()
    result.test_functions[test_function.name] = test_function
    delta = KernelTag(KernelKind.DELTA_DISTRIB, dim=functional.dim, sig=functional.dim - 1)
    extra = constant_vertex(test_function)
    for graph, value in functional.items():
        for index, vertex in enumerate(graph.vertices):
            for leg in LEG_TYPES:
                remaining = vertex.monomial.remove_leg(leg)
                if remaining is None:
                    continue
                vertices = list(graph.vertices)
                vertices[index] = vertex.with_monomial(remaining)
                vertices.append(extra)
                edges = list(graph.edges) + [Edge(index, len(vertices) - 1, delta, (leg, PLAIN))]
                result.add(value, vertices, edges)
    return result


def dyson_schwinger_check(functional: GraphSum, test_function: TestFunction,
                          hbar_max: Optional[int] = None) -> bool:
    """F ·_T φ(Pf) = F · φ(Pf) + iħ⟨F⁽¹⁾, f⟩"""
    operator = GraphSum.field_operator(test_function, functional.dim)
    lhs = timeordered(functional, operator, hbar_max=hbar_max)
    rhs = pointwise(functional, operator) + derivative_pairing(functional, test_function).scale(ExactScalar.i())
    if hbar_max is not None:
        rhs = rhs.truncate(hbar_max=hbar_max)
    residual = lhs - rhs
    return _report("Dyson–Schwinger 方程", residual.is_zero(), residual)


def associativity_check(first: GraphSum, second: GraphSum, third: GraphSum, product: Product,
                        name: str = "乘积") -> bool:
    residual = product(product(first, second), third) - product(first, product(second, third))
    return _report(f"{name}结合律", residual.is_zero(), residual)


def conjugation_check(first: GraphSum, second: GraphSum) -> bool:
    """(F⋆G)* = G*⋆F*"""
    residual = star(first, second).conj() - star(second.conj(), first.conj())
    return _report("⋆ 共轭", residual.is_zero(), residual)


def field_functional(test_function: TestFunction, dim: int = 4, coefficient=1) -> GraphSum:
    """φ(f) 的图表示"""
    return GraphSum.from_local(LocalFunctional.monomial(PHI, test_function, coefficient, dim))


def commutator_check(f: TestFunction, g: TestFunction, dim: int = 4) -> bool:
    """[φ(f), φ(g)]_⋆ = iħ⟨f, Δg⟩"""
    phi_f, phi_g = field_functional(f, dim), field_functional(g, dim)
    commutator = star(phi_f, phi_g) - star(phi_g, phi_f)
    expected = commutator.empty_like()
    comm = KernelTag(KernelKind.DELTA_COMM, dim=dim, sig=dim - 1)
    expected.add(ExactScalar.i(), [constant_vertex(f), constant_vertex(g)], [Edge(0, 1, comm)])
    residual = commutator - expected
    return _report("⋆ 对易子", residual.is_zero(), residual)

