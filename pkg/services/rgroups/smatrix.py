"""
S 矩阵模块
由延拓选择表构造 S(V) = exp_{T_H}(V) 的图表示

主要功能：
1. ExtensionTable: 按一束 H_F 边的签名给出延拓偏移（归一化核的 δ 多项式）
2. SMatrix: 逐图把发散束替换为参照延拓 + 局域化偏移
3. 三个以上顶点的 2-连通发散子图没有选择时报错
4. 因果分解与幺正性检查

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from services.common.errors import MissingExtensionError, UnsupportedChannelError
from services.exact import ExactScalar
from services.functionals import DERIV, PLAIN, LocalFunctional
from services.kernels import KernelKind
from services.products import (
    ContractionGraph, Edge, GraphSum, Vertex, exp_product, expand_edges, merge_vertices, orient,
    require_causally_later, star_hadamard, strip_labels, timeordered_hadamard,
)
from services.renorm import DeltaPolynomial, channel_violation

logger = logging.getLogger("pqft.rgroups.smatrix")

Ends = Tuple[str, str]
Signature = Tuple[Ends, ...]
Functional = Union[LocalFunctional, GraphSum]


def normalize_signature(ends: Sequence[Ends]) -> Signature:
    """端点腿类型的有序多重集，与其镜像取较小者"""
    direct = tuple(sorted(tuple(e) for e in ends))
    mirrored = tuple(sorted((e[1], e[0]) for e in ends))
    return min(direct, mirrored)


def bundle_signature(edges: Sequence[Edge]) -> Signature:
    return normalize_signature([e.ends for e in edges])


def bundle_omega(dim: int, signature: Signature) -> int:
    """ω = n(d−2) + 导数端数 − d"""
    derivs = sum(end == DERIV for ends in signature for end in ends)
    return len(signature) * (dim - 2) + derivs - dim


def bundle_symmetry(signature: Signature) -> int:
    """∏ n_e!：同类型边的重数阶乘"""
    return math.prod(math.factorial(n) for n in Counter(signature).values())


@dataclass(frozen=True)
class ExtensionChoice:
    """一个签名的延拓：参照延拓加上 δ 多项式偏移"""
    offset: DeltaPolynomial
    label: str = "ref"
    note: str = ""

    def descriptor(self) -> Dict[str, Any]:
        return {"label": self.label, "offset": self.offset.descriptor(), "note": self.note}


class ExtensionTable:
    """
    延拓选择表

    default 为 None 时，表外的发散签名抛出 MissingExtensionError；
    参照表的 default 是零偏移
    """

    def __init__(self, dim: int, choices: Optional[Mapping[Signature, ExtensionChoice]] = None,
                 name: str = "custom", default: Optional[ExtensionChoice] = None):
        self.dim = dim
        self.name = name
        self.default = default
        self.choices: Dict[Signature, ExtensionChoice] = {
            normalize_signature(sig): choice
            for sig, choice in (choices or {}).items()
        }

    @classmethod
    def reference(cls, dim: int = 4) -> "ExtensionTable":
        return cls(dim, {}, "reference", ExtensionChoice(DeltaPolynomial.zero()))

    def lookup(self, signature: Signature, order: int) -> ExtensionChoice:
        """
        Raises:
            MissingExtensionError: 签名不在表中且没有默认选择
        """
        choice = self.choices.get(signature, self.default)
        if choice is None:
            kernel = {"dim": self.dim, "bundle": [list(e) for e in signature],
                      "omega": bundle_omega(self.dim, signature), "table": self.name}
            raise MissingExtensionError(kernel, order)
        return choice

    def with_choice(self, signature: Signature, choice: ExtensionChoice,
                    name: Optional[str] = None) -> "ExtensionTable":
        choices = dict(self.choices)
        choices[normalize_signature(signature)] = choice
        return ExtensionTable(self.dim, choices, name or self.name, self.default)

    def shifted(self, log_ratio: ExactScalar, name: Optional[str] = None) -> "ShiftedExtensionTable":
        """
        偏移加上 log_ratio × 标度破坏

        κ → κ·e^{log_ratio} 与 σ_ρ 共轭（log_ratio = log ρ）都是这种形式
        """
        return ShiftedExtensionTable(self, ExactScalar.coerce(log_ratio), name)

    def descriptor(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "choices": [{"bundle": [list(e) for e in sig], **choice.descriptor()}
                        for sig, choice in sorted(self.choices.items())],
            "default": self.default.descriptor() if self.default else None,
        }


def scaling_violation(dim: int, signature: Signature) -> DeltaPolynomial:
    """归一化束核的标度破坏：对所有 ω − 2k ≥ 0 的质量阶求和"""
    omega = bundle_omega(dim, signature)
    total = DeltaPolynomial.zero()
    for mass_order in range(omega // 2 + 1):
        total = total + channel_violation(dim, list(signature), mass_order)
    return total


class ShiftedExtensionTable(ExtensionTable):
    """按需计算的移位表：任一签名的偏移为基表偏移 + log_ratio × 标度破坏"""

    def __init__(self, base: ExtensionTable, log_ratio: ExactScalar, name: Optional[str] = None):
        super().__init__(base.dim, base.choices, name or f"{base.name}+[{log_ratio.to_text()}]",
                         base.default)
        self.base = base
        self.log_ratio = log_ratio
        self._cache: Dict[Signature, ExtensionChoice] = {}

    def lookup(self, signature: Signature, order: int) -> ExtensionChoice:
        if signature not in self._cache:
            choice = self.base.lookup(signature, order)
            extra = scaling_violation(self.dim, signature).scale(self.log_ratio)
            self._cache[signature] = ExtensionChoice(choice.offset + extra, choice.label, choice.note)
        return self._cache[signature]

    def descriptor(self) -> Dict[str, Any]:
        data = self.base.descriptor()
        data.update({"name": self.name, "logRatio": self.log_ratio.to_text()})
        return data


def plain_signature(n: int) -> Signature:
    return tuple([(PLAIN, PLAIN)] * n)


class SMatrix:
    """
    由延拓表确定的 S 矩阵，截断到耦合阶 order

    S(V) 的每个图中，H_F 边按顶点对成束；ω ≥ 0 的束被替换为带标签的参照边
    与合并两顶点的局域项之和
    """

    def __init__(self, table: ExtensionTable, order: int = 2, name: Optional[str] = None):
        self.table = table
        self.order = order
        self.dim = table.dim
        self.name = name or table.name
        self.logger = logging.getLogger(f"pqft.rgroups.smatrix.{self.name}")

    def raw(self, functional: Functional) -> GraphSum:
        """未延拓的 exp_{T_H}(V)，耦合阶 ≤ order"""
        graphs = functional if isinstance(functional, GraphSum) else GraphSum.from_local(functional)
        product = lambda first, second: timeordered_hadamard(first, second, coupling_max=self.order)
        return exp_product(graphs, product, self.order)

    def __call__(self, functional: Functional) -> GraphSum:
        raw = self.raw(functional)
        result = raw.empty_like()
        for graph, value in raw.items():
            self._check_subgraphs(graph)
            for factor, vertices, edges in self._extend(list(graph.vertices), list(graph.edges)):
                result.add(value * factor, vertices, edges)
        self.logger.debug(f"S(V) 共 {len(result)} 个图")
        return result

    def component(self, functional: Functional, n: int) -> GraphSum:
        return self(functional).coupling_part(n)

    def compose(self, zmap) -> "ComposedSMatrix":
        """S ∘ Z"""
        return ComposedSMatrix(self, zmap)

    # ------------------------------------------------------------------
    # 延拓
    # ------------------------------------------------------------------

    def _check_subgraphs(self, graph: ContractionGraph) -> None:
        """三个以上顶点的 2-连通子图若 ω ≥ 0，需要本表不提供的多坐标延拓"""
        count = len(graph.vertices)
        if count < 3:
            return
        feynman = [e for e in graph.edges if e.tag.kind is KernelKind.FEYNMAN_H]
        for size in range(3, count + 1):
            for subset in itertools.combinations(range(count), size):
                inside = [e for e in feynman if e.a in subset and e.b in subset]
                simple = nx.Graph()
                simple.add_nodes_from(subset)
                simple.add_edges_from((e.a, e.b) for e in inside if e.a != e.b)
                if not nx.is_biconnected(simple):
                    continue
                derivs = sum(end == DERIV for e in inside for end in e.ends)
                omega = len(inside) * (self.dim - 2) + derivs - self.dim * (size - 1)
                if omega >= 0:
                    kernel = {"dim": self.dim, "vertices": size, "edges": len(inside), "omega": omega,
                              "graph": graph.text()}
                    raise MissingExtensionError(kernel, graph.coupling)

    def _next_bundle(self, edges: Sequence[Edge]) -> Optional[Tuple[Tuple[int, int], List[int]]]:
        groups: Dict[Tuple[int, int], List[int]] = {}
        for index, edge in enumerate(edges):
            if edge.label or edge.tag.kind is not KernelKind.FEYNMAN_H or edge.a == edge.b:
                continue
            groups.setdefault((edge.a, edge.b), []).append(index)
        for pair in sorted(groups):
            members = groups[pair]
            if bundle_omega(self.dim, bundle_signature([edges[i] for i in members])) >= 0:
                return pair, members
        return None

    def _extend(self, vertices: List[Vertex], edges: List[Edge]) -> List[Tuple[ExactScalar, List[Vertex], List[Edge]]]:
        found = self._next_bundle(edges)
        if found is None:
            return [(ExactScalar.one(), vertices, edges)]
        (a, b), members = found
        bundle = [edges[i] for i in members]
        signature = bundle_signature(bundle)
        choice = self.table.lookup(signature, len(vertices))
        labelled = [replace(e, label=choice.label) if i in members else e for i, e in enumerate(edges)]
        results = self._extend(vertices, labelled)
        symmetry = bundle_symmetry(signature)
        for (box, mass), coefficient in choice.offset.items():
            if box:
                raise UnsupportedChannelError(f"□^{box}δ 偏移不能在顶点合并中局域化: {list(signature)}")
            factor, merged_vertices, merged_edges = self._merge(vertices, edges, a, b, members, mass)
            weight = coefficient * symmetry * factor
            for inner, v, e in self._extend(merged_vertices, merged_edges):
                results.append((weight * inner, v, e))
        return results

    @staticmethod
    def _merge(vertices: Sequence[Vertex], edges: Sequence[Edge], a: int, b: int,
               members: Sequence[int], mass: int) -> Tuple[Fraction, List[Vertex], List[Edge]]:
        """把束的两端合并为一个顶点：每条边的 ħ 并入顶点，偏移的 m² 幂加到质量上"""
        factor, merged = merge_vertices(vertices[a], vertices[b])
        merged = replace(merged, hbar=merged.hbar + len(members), mass=merged.mass + mass)
        keep = [i for i in range(len(vertices)) if i not in (a, b)]
        position = {old: new for new, old in enumerate(keep)}
        position[a] = position[b] = len(keep)
        new_vertices = [vertices[i] for i in keep] + [merged]
        new_edges: List[Edge] = []
        for index, edge in enumerate(edges):
            if index in members:
                continue
            if {edge.a, edge.b} == {a, b}:
                raise UnsupportedChannelError(f"合并顶点之间残留非束边: {edge.text()}")
            sign, moved = orient(edge, position[edge.a], position[edge.b])
            if sign < 0:
                factor = -factor
            new_edges.append(moved)
        return factor, new_vertices, new_edges


class ComposedSMatrix:
    """S ∘ Z：先作用 Z 再取 S"""

    def __init__(self, smatrix: SMatrix, zmap):
        self.smatrix = smatrix
        self.zmap = zmap
        self.order = smatrix.order
        self.dim = smatrix.dim
        self.name = f"{smatrix.name}∘Z"

    def __call__(self, functional: LocalFunctional) -> GraphSum:
        return self.smatrix(self.zmap.apply(functional))

    def component(self, functional: LocalFunctional, n: int) -> GraphSum:
        return self(functional).coupling_part(n)


# ----------------------------------------------------------------------
# 检查
# ----------------------------------------------------------------------

def causal_factorization(smatrix: SMatrix, later: LocalFunctional, earlier: LocalFunctional) -> bool:
    """
    later 晚于 earlier 时 S(A+B) = S(A) ⋆_H S(B)

    Raises:
        SupportPreconditionError: 支集不满足晚于关系
    """
    first, second = GraphSum.from_local(later), GraphSum.from_local(earlier)
    require_causally_later(first, second)
    lhs = smatrix(later + earlier)
    rhs = star_hadamard(smatrix(later), smatrix(earlier), coupling_max=smatrix.order)
    residual = expand_edges(strip_labels(lhs - rhs))
    passed = residual.is_zero()
    marker = "✅" if passed else "❌"
    logger.info(f"{marker} S 矩阵因果分解 ({smatrix.name}): 剩余 {len(residual)} 个图")
    return passed


def _has_mixed_bundle(graph: ContractionGraph) -> bool:
    """
    同一顶点对之间同时有 Δ_R 与 Δ_A

    Δ_R(x,y) 支集在 y 的未来光锥、Δ_A(x,y) 在过去光锥，乘积只在 x = y 处非零，
    离开对角线恒为零。对角线上的全部自由度是束的 δ 偏移，它们以合并顶点的
    局域图出现在剩余中，不会被这里的过滤去掉
    """
    for edges in graph.bundles().values():
        kinds = {e.tag.kind for e in edges}
        if KernelKind.DELTA_RET in kinds and KernelKind.DELTA_ADV in kinds:
            return True
    return False


def unitarity_residual(smatrix: SMatrix, functional: LocalFunctional) -> GraphSum:
    """
    S(V)* ⋆_H S(V) − 1 在推迟/超前基中去掉混合束后的剩余

    S(V)* 由展开后的图取系数共轭得到（Δ_R、Δ_A、H 均为实核）
    """
    expanded = expand_edges(strip_labels(smatrix(functional)))
    product = star_hadamard(expanded.conj(), expanded, coupling_max=smatrix.order)
    residual = expand_edges(product) - GraphSum.one(smatrix.dim)
    return residual.filter(lambda graph: not _has_mixed_bundle(graph))


def unitarity_check(smatrix: SMatrix, functional: LocalFunctional) -> bool:
    """S(V)* ⋆ S(V) = 1：偏移须与其共轭抵消"""
    residual = unitarity_residual(smatrix, functional)
    passed = residual.is_zero()
    if passed:
        logger.info(f"✅ 幺正性 ({smatrix.name})")
    else:
        logger.warning(f"❌ 幺正性 ({smatrix.name}): 剩余 {len(residual)} 个图")
        for line in residual.dump()[:10]:
            logger.debug(f"   {line}")
    return passed
