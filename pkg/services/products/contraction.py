"""
收缩乘积模块
所有乘积都是 M ∘ exp(ħ Γ_K) 形式：在两个因子的顶点之间枚举交叉收缩

主要功能：
1. 乘积选项表: ⋆、·_T、·_{T̄}、α_H 表象下的 ⋆_H 与 ·_{T_H}、正则化 ·_Λ
2. 交叉收缩的枚举（腿预算、ħ 截断、1/n! 因子）
3. P 顶点规则：PΔ_R = PΔ_A = PΔ_D = δ，PΔ = PH = 0，PH_F = iδ
4. 参照路径 α_K = exp(ħΓ_K) 与 α(α⁻¹F · α⁻¹G)
5. dM_Λ/dΛ、截断导数、推迟/超前展开

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from services.exact import ExactScalar
from services.functionals import DERIV, LEG_TYPES, PLAIN, FieldMonomial
from services.kernels import (
    KernelKind, KernelTag, regularized_dot_tag, regularized_tag, retarded_advanced_expansion,
)
from .graph import ContractionGraph, Edge, GraphSum, Vertex

logger = logging.getLogger("pqft.products.contraction")

Product = Callable[[GraphSum, GraphSum], GraphSum]


@dataclass(frozen=True)
class EdgeOption:
    """一种收缩：每条边的权重 w（已提出 ħ）与核标签"""
    name: str
    weight: ExactScalar
    tag: KernelTag


def _tag(kind: KernelKind, dim: int) -> KernelTag:
    return KernelTag(kind, dim=dim, sig=dim - 1)


def product_options(name: str, dim: int = 4) -> List[EdgeOption]:
    """
    乘积名 → 收缩选项

    Raises:
        ValueError: 不支持的乘积
    """
    half_i = ExactScalar.i() * Fraction(1, 2)
    builders = {
        "pointwise": lambda: [],
        "star": lambda: [EdgeOption("star", half_i, _tag(KernelKind.DELTA_COMM, dim))],
        "time_ordered": lambda: [EdgeOption("time_ordered", ExactScalar.i(), _tag(KernelKind.DELTA_DIRAC, dim))],
        "anti_time_ordered": lambda: [EdgeOption("anti_time_ordered", -ExactScalar.i(),
                                                 _tag(KernelKind.DELTA_DIRAC, dim))],
        "star_h": lambda: [EdgeOption("star", half_i, _tag(KernelKind.DELTA_COMM, dim)),
                           EdgeOption("hadamard", ExactScalar.one(), _tag(KernelKind.HADAMARD, dim))],
        "time_ordered_h": lambda: [EdgeOption("time_ordered_h", ExactScalar.one(),
                                              _tag(KernelKind.FEYNMAN_H, dim))],
    }
    if name not in builders:
        raise ValueError(f"不支持的乘积: {name}，可用: {sorted(builders)}")
    return builders[name]()


def regularized_options(family: str = "shifted", cutoff: Optional[Fraction] = None, dim: int = 4,
                        picture: str = "hadamard", with_dot: bool = False) -> List[EdgeOption]:
    """
    ·_Λ 的收缩选项

    hadamard 表象下边为 h_Λ（Λ=0 时为零），delta 表象下边为 k_Λ = h_Λ − H；
    with_dot 时额外给出 k̇_Λ 边
    """
    if picture not in ("hadamard", "delta"):
        raise ValueError(f"不支持的表象: {picture}")
    tag = regularized_tag(family, cutoff, picture == "delta", dim, dim - 1)
    options = [EdgeOption("regularized", ExactScalar.one(), tag)]
    if with_dot:
        options.append(EdgeOption("regularized_dot", ExactScalar.one(), regularized_dot_tag(tag)))
    return options


# ----------------------------------------------------------------------
# 枚举
# ----------------------------------------------------------------------

LegKey = Tuple[int, str]


@dataclass(frozen=True)
class _Slot:
    a: int
    b: int
    ends: Tuple[str, str]
    option: EdgeOption
    uses: Tuple[Tuple[LegKey, int], ...]
    half: bool = False


def _cross_slots(left: int, total: int, vertices: Sequence[Vertex],
                 options: Sequence[EdgeOption]) -> List[_Slot]:
    slots = []
    for a in range(left):
        for b in range(left, total):
            for ta in LEG_TYPES:
                if not vertices[a].monomial.legs(ta):
                    continue
                for tb in LEG_TYPES:
                    if not vertices[b].monomial.legs(tb):
                        continue
                    for option in options:
                        slots.append(_Slot(a, b, (ta, tb), option, (((a, ta), 1), ((b, tb), 1))))
    return slots


def _internal_slots(vertices: Sequence[Vertex], option: EdgeOption) -> List[_Slot]:
    slots = []
    count = len(vertices)
    for a in range(count):
        for b in range(a, count):
            for ta in LEG_TYPES:
                for tb in LEG_TYPES:
                    if a == b and ta > tb:
                        continue
                    if a == b and ta == tb:
                        if vertices[a].monomial.legs(ta) < 2:
                            continue
                        slots.append(_Slot(a, a, (ta, ta), option, (((a, ta), 2),), half=True))
                        continue
                    if not vertices[a].monomial.legs(ta) or not vertices[b].monomial.legs(tb):
                        continue
                    slots.append(_Slot(a, b, (ta, tb), option, (((a, ta), 1), ((b, tb), 1))))
    return slots


def _assignments(slots: Sequence[_Slot], budget: Dict[LegKey, int], max_edges: Optional[int],
                 required: Optional[str]) -> Iterator[Tuple[int, ...]]:
    """在腿预算内枚举每个槽的边数；required 指定的选项必须恰好出现一次"""
    counts = [0] * len(slots)

    def rec(k: int, used: int, required_count: int):
        if k == len(slots):
            if required is None or required_count == 1:
                yield tuple(counts)
            return
        slot = slots[k]
        limit = min(budget[key] // need for key, need in slot.uses)
        if max_edges is not None:
            limit = min(limit, max_edges - used)
        is_required = required is not None and slot.option.name == required
        if is_required:
            limit = min(limit, 1 - required_count)
        for n in range(max(limit, 0) + 1):
            counts[k] = n
            for key, need in slot.uses:
                budget[key] -= need * n
            yield from rec(k + 1, used + n, required_count + (n if is_required else 0))
            for key, need in slot.uses:
                budget[key] += need * n
        counts[k] = 0

    yield from rec(0, 0, 0)


def _budget(vertices: Sequence[Vertex]) -> Dict[LegKey, int]:
    return {(i, t): v.monomial.legs(t) for i, v in enumerate(vertices) for t in LEG_TYPES}


def _realize(vertices: Sequence[Vertex], edges: Sequence[Edge], slots: Sequence[_Slot],
             counts: Sequence[int]) -> Tuple[ExactScalar, List[Vertex], List[Edge], List[int]]:
    coefficient = ExactScalar.one()
    used: Counter = Counter()
    new_edges = list(edges)
    touched: List[int] = []
    for slot, n in zip(slots, counts):
        if not n:
            continue
        factor = slot.option.weight ** n * Fraction(1, math.factorial(n))
        if slot.half:
            factor = factor * Fraction(1, 2 ** n)
        coefficient = coefficient * factor
        for key, need in slot.uses:
            used[key] += need * n
        for _ in range(n):
            touched.append(len(new_edges))
            new_edges.append(Edge(slot.a, slot.b, slot.option.tag, slot.ends))
    new_vertices = []
    for i, vertex in enumerate(vertices):
        remaining = FieldMonomial(vertex.monomial.phi - used[(i, PLAIN)],
                                  vertex.monomial.deriv - used[(i, DERIV)])
        new_vertices.append(vertex.with_monomial(remaining))
    return coefficient, new_vertices, new_edges, touched


def _apply_operator(coefficient: ExactScalar, vertices: List[Vertex], edges: List[Edge],
                    touched: Sequence[int]) -> Optional[ExactScalar]:
    """
    P 顶点规则：收缩到 φ(Pf) 的边被 P 作用

    Returns:
        Optional[ExactScalar]: 修正后的系数，图为零时返回 None（原地改写顶点与边）
    """
    for index in touched:
        edge = edges[index]
        for end in (edge.a, edge.b):
            if not vertices[end].operator:
                continue
            kind = edge.tag.kind
            if kind in (KernelKind.DELTA_COMM, KernelKind.HADAMARD):
                return None
            if kind is KernelKind.FEYNMAN_H:
                coefficient = coefficient * ExactScalar.i()
            elif kind not in (KernelKind.DELTA_RET, KernelKind.DELTA_ADV, KernelKind.DELTA_DIRAC):
                raise ValueError(f"不支持的 P 作用: P{edge.tag.short()}")
            edges[index] = replace(edge, tag=KernelTag(KernelKind.DELTA_DISTRIB, dim=edge.tag.dim,
                                                       sig=edge.tag.sig))
            vertices[end] = replace(vertices[end], operator="")
    return coefficient


def _shift_edges(edges: Sequence[Edge], offset: int) -> Tuple[Edge, ...]:
    return tuple(replace(e, a=e.a + offset, b=e.b + offset) for e in edges)


def contract(first: GraphSum, second: GraphSum, options: Sequence[EdgeOption],
             hbar_max: Optional[int] = None, coupling_max: Optional[int] = None,
             required: Optional[str] = None) -> GraphSum:
    """
    M ∘ exp(ħ Σ_o w_o Γ_o)(F ⊗ G)：枚举两个因子顶点之间的所有交叉收缩

    Args:
        first: 左因子
        second: 右因子
        options: 收缩选项
        hbar_max: 结果的 ħ 阶上限
        coupling_max: 结果的耦合阶上限
        required: 必须恰好出现一次的选项名
    """
    functions = dict(first.test_functions)
    functions.update(second.test_functions)
    result = GraphSum(first.dim, functions)
    for g1, c1 in first.items():
        for g2, c2 in second.items():
            if coupling_max is not None and g1.coupling + g2.coupling > coupling_max:
                continue
            base_hbar = g1.hbar + g2.hbar
            max_edges = None if hbar_max is None else hbar_max - base_hbar
            if max_edges is not None and max_edges < 0:
                continue
            vertices = g1.vertices + g2.vertices
            edges = g1.edges + _shift_edges(g2.edges, len(g1.vertices))
            slots = _cross_slots(len(g1.vertices), len(vertices), vertices, options)
            for counts in _assignments(slots, _budget(vertices), max_edges, required):
                factor, new_vertices, new_edges, touched = _realize(vertices, edges, slots, counts)
                factor = _apply_operator(factor, new_vertices, new_edges, touched)
                if factor is None:
                    continue
                result.add(c1 * c2 * factor, new_vertices, new_edges)
    return result


# ----------------------------------------------------------------------
# 命名乘积
# ----------------------------------------------------------------------

def pointwise(first: GraphSum, second: GraphSum, **limits) -> GraphSum:
    return contract(first, second, [], **limits)


def star(first: GraphSum, second: GraphSum, **limits) -> GraphSum:
    """F ⋆ G，每条边 (iħ/2)Δ"""
    return contract(first, second, product_options("star", first.dim), **limits)


def timeordered(first: GraphSum, second: GraphSum, **limits) -> GraphSum:
    """F ·_T G，每条边 iħΔ_D"""
    return contract(first, second, product_options("time_ordered", first.dim), **limits)


def anti_timeordered(first: GraphSum, second: GraphSum, **limits) -> GraphSum:
    """F ·_{T̄} G，每条边 −iħΔ_D"""
    return contract(first, second, product_options("anti_time_ordered", first.dim), **limits)


def star_hadamard(first: GraphSum, second: GraphSum, **limits) -> GraphSum:
    """α_H 表象下的 ⋆_H：边为 (iħ/2)Δ + ħH"""
    return contract(first, second, product_options("star_h", first.dim), **limits)


def timeordered_hadamard(first: GraphSum, second: GraphSum, **limits) -> GraphSum:
    """α_H 表象下的 ·_{T_H}：边为 ħH_F"""
    return contract(first, second, product_options("time_ordered_h", first.dim), **limits)


def regularized_product(first: GraphSum, second: GraphSum, family: str = "shifted",
                        cutoff: Optional[Fraction] = None, picture: str = "hadamard",
                        **limits) -> GraphSum:
    """F ·_Λ G；hadamard 表象下 Λ=0 退化为逐点乘积"""
    return contract(first, second, regularized_options(family, cutoff, first.dim, picture), **limits)


def dM_dLambda(first: GraphSum, second: GraphSum, family: str = "shifted",
               cutoff: Optional[Fraction] = None, **limits) -> GraphSum:
    """d/dΛ (F ·_Λ G) 中只含交叉收缩的部分：恰好一条 k̇_Λ 边，其余为 h_Λ"""
    options = regularized_options(family, cutoff, first.dim, "hadamard", with_dot=True)
    return contract(first, second, options, required="regularized_dot", **limits)


def named_product(name: str, **options) -> Product:
    """
    乘积工厂

    Raises:
        ValueError: 不支持的乘积
    """
    table = {
        "pointwise": pointwise,
        "star": star,
        "time_ordered": timeordered,
        "anti_time_ordered": anti_timeordered,
        "star_h": star_hadamard,
        "time_ordered_h": timeordered_hadamard,
        "regularized": regularized_product,
    }
    if name not in table:
        raise ValueError(f"不支持的乘积: {name}，可用: {sorted(table)}")
    fn = table[name]
    return lambda first, second: fn(first, second, **options)


def power(functional: GraphSum, n: int, product: Product) -> GraphSum:
    """F^{∘n}，n=0 时为单位"""
    result = GraphSum.one(functional.dim)
    result.test_functions.update(functional.test_functions)
    for _ in range(n):
        result = product(result, functional)
    return result


def exp_product(functional: GraphSum, product: Product, order: int) -> GraphSum:
    """Σ_{n≤order} F^{∘n}/n!，用于 exp_T(V)"""
    result = GraphSum.one(functional.dim)
    result.test_functions.update(functional.test_functions)
    term = result
    for n in range(1, order + 1):
        term = product(term, functional).scale(Fraction(1, n))
        result = result + term
    return result


def log_product(functional: GraphSum, product: Product, order: int) -> GraphSum:
    """
    log(E) = Σ_k (−1)^{k+1}/k · (E − 1)^{∘k}

    Raises:
        ValueError: E 的单位系数不为 1
    """
    if functional.unit_coefficient() != ExactScalar.one():
        raise ValueError("对数需要单位系数为 1 的生成泛函")
    shifted = functional - GraphSum.one(functional.dim)
    result = functional.empty_like()
    term = GraphSum.one(functional.dim)
    for k in range(1, order + 1):
        term = product(term, shifted)
        result = result + term.scale(Fraction((-1) ** (k + 1), k))
    return result


# ----------------------------------------------------------------------
# 参照路径
# ----------------------------------------------------------------------

def alpha(functional: GraphSum, option: EdgeOption, sign: int = 1,
          hbar_max: Optional[int] = None) -> GraphSum:
    """
    α_K^{±1} = exp(±ħΓ_K)：在所有顶点对（含自环）之间收缩剩余腿

    同类型两腿的自环带 1/2
    """
    result = functional.empty_like()
    signed = EdgeOption(option.name, option.weight * sign, option.tag)
    for graph, value in functional.items():
        if any(v.operator for v in graph.vertices):
            raise ValueError("参照路径不支持带算子的顶点")
        max_edges = None if hbar_max is None else hbar_max - graph.hbar
        if max_edges is not None and max_edges < 0:
            continue
        slots = _internal_slots(graph.vertices, signed)
        for counts in _assignments(slots, _budget(graph.vertices), max_edges, None):
            factor, vertices, edges, _ = _realize(graph.vertices, graph.edges, slots, counts)
            result.add(value * factor, vertices, edges)
    return result


def reference_product(first: GraphSum, second: GraphSum,
                      option: Union[str, EdgeOption] = "time_ordered",
                      hbar_max: Optional[int] = None) -> GraphSum:
    """
    α_K(α_K⁻¹F · α_K⁻¹G)，只对单一选项的乘积有定义

    option 为乘积名或单个收缩选项（如正则化边）；与交叉枚举的结果按图逐项一致
    """
    if isinstance(option, str):
        options = product_options(option, first.dim)
        if len(options) != 1:
            raise ValueError(f"参照路径需要单一收缩: {option}")
        option = options[0]
    left = alpha(first, option, -1, hbar_max)
    right = alpha(second, option, -1, hbar_max)
    return alpha(pointwise(left, right, hbar_max=hbar_max), option, 1, hbar_max)


# ----------------------------------------------------------------------
# 图变换
# ----------------------------------------------------------------------

def differentiate_cutoff(functional: GraphSum) -> GraphSum:
    """d/dΛ：Leibniz 规则，逐条把 h_Λ 边换成 k̇_Λ"""
    def rewrite(graph: ContractionGraph):
        for index, edge in enumerate(graph.edges):
            if edge.tag.kind is not KernelKind.REGULARIZED:
                continue
            edges = list(graph.edges)
            edges[index] = replace(edge, tag=regularized_dot_tag(edge.tag))
            yield ExactScalar.one(), graph.vertices, edges
    return functional.map_graphs(lambda graph: list(rewrite(graph)))


def expand_edges(functional: GraphSum,
                 predicate: Optional[Callable[[ContractionGraph, Edge], bool]] = None) -> GraphSum:
    """把 Δ、Δ_D、H_F 边展开到推迟/超前/Hadamard 基；predicate 为假的边保持不变"""
    def rewrite(graph: ContractionGraph):
        choices = []
        for edge in graph.edges:
            if predicate is not None and not predicate(graph, edge):
                choices.append([(ExactScalar.one(), edge.tag)])
            else:
                choices.append(retarded_advanced_expansion(edge.tag))
        terms = [(ExactScalar.one(), [])]
        for edge, options in zip(graph.edges, choices):
            terms = [(c * w, chosen + [replace(edge, tag=tag)])
                     for c, chosen in terms for w, tag in options]
        return [(c, graph.vertices, chosen) for c, chosen in terms]
    return functional.map_graphs(rewrite)


def strip_labels(functional: GraphSum) -> GraphSum:
    """去掉延拓标签，带标签的参照边按普通边处理"""
    return functional.map_graphs(
        lambda graph: [(ExactScalar.one(), graph.vertices, [replace(e, label="") for e in graph.edges])])
