"""
收缩图模块
乘积、S 矩阵与流方程共用的图表示

主要功能：
1. Vertex / Edge / ContractionGraph: 顶点为密度单项式，边为核标签
2. 规范形: 顶点排序 + 同键顶点置换下的最小边序列，自同构符号不一致时图为零
3. 按支集消失规则剪枝
4. GraphSum: 规范图到精确系数的有限和

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from services.common.errors import NonLocalResidueError
from services.exact import ExactScalar
from services.functionals import (
    ONE, PLAIN, FieldMonomial, LocalFunctional, LocalTerm, Smearing, SupportRegion, TestFunction,
)
from services.kernels import KernelTag, Orientation, SupportRule

logger = logging.getLogger("pqft.products.graph")


def _region_key(region: Optional[SupportRegion]) -> tuple:
    if region is None:
        return (0,)
    return (1,) + tuple((box.lower, box.upper) for box in region.boxes)


@dataclass(frozen=True)
class Vertex:
    """
    图顶点: ∫ smearing · (m²)^mass · ħ^hbar · g^coupling · monomial

    monomial 为尚未收缩的腿；region 为 None 表示支集未知（不参与剪枝）；
    operator 为 "P" 时顶点是 φ(Pf)
    """
    smearing: Smearing
    monomial: FieldMonomial
    region: Optional[SupportRegion] = None
    operator: str = ""
    hbar: int = 0
    coupling: int = 0
    mass: int = 0
    label: str = field(default="", compare=False)

    def sort_key(self) -> tuple:
        return (self.smearing.slots, self.smearing.dilation, self.monomial.phi, self.monomial.deriv,
                self.operator, self.hbar, self.coupling, self.mass, _region_key(self.region))

    def with_monomial(self, monomial: FieldMonomial) -> "Vertex":
        return replace(self, monomial=monomial)

    def text(self) -> str:
        op = "P" if self.operator else ""
        extra = []
        if self.hbar:
            extra.append(f"hbar^{self.hbar}")
        if self.coupling:
            extra.append(f"g^{self.coupling}")
        if self.mass:
            extra.append(f"m2^{self.mass}")
        suffix = f"[{' '.join(extra)}]" if extra else ""
        return f"{op}{self.smearing.text}:{self.monomial.name}{suffix}"


@dataclass(frozen=True)
class Edge:
    """边: tag(x_a, x_b)，ends 为两端腿类型，label 标记延拓选择"""
    a: int
    b: int
    tag: KernelTag
    ends: Tuple[str, str] = (PLAIN, PLAIN)
    label: str = ""

    def sort_key(self) -> tuple:
        return (self.a, self.b, self.tag.sort_key(), self.ends, self.label)

    def text(self) -> str:
        label = f"@{self.label}" if self.label else ""
        return f"{self.tag.short()}{label}({self.a},{self.b};{self.ends[0][0]}{self.ends[1][0]})"


def orient(edge: Edge, a: int, b: int) -> Tuple[int, Edge]:
    """把边重新挂到 (a, b) 上并规范方向，返回 (符号, 边)"""
    sign = 1
    tag, ends = edge.tag, edge.ends
    if a > b or (a == b and ends[0] > ends[1]):
        s, tag = tag.swapped()
        sign *= s
        a, b = min(a, b), max(a, b)
        ends = (ends[1], ends[0])
    return sign, Edge(a, b, tag, ends, edge.label)


@dataclass(frozen=True)
class ContractionGraph:
    """规范化后的收缩图（不带系数）"""
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]

    def sort_key(self) -> tuple:
        return (tuple(v.sort_key() for v in self.vertices), tuple(e.sort_key() for e in self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def hbar(self) -> int:
        """每条边一个 ħ，加上顶点自带的 ħ 幂"""
        return self.edge_count + sum(v.hbar for v in self.vertices)

    @property
    def coupling(self) -> int:
        return sum(v.coupling for v in self.vertices)

    @property
    def mass(self) -> int:
        return sum(v.mass for v in self.vertices) + sum(e.tag.mass_order for e in self.edges)

    def is_unit(self) -> bool:
        return not self.vertices

    def is_localized(self) -> bool:
        return len(self.vertices) == 1 and not self.edges

    def bundles(self) -> Dict[Tuple[int, int], List[Edge]]:
        groups: Dict[Tuple[int, int], List[Edge]] = {}
        for edge in self.edges:
            groups.setdefault((edge.a, edge.b), []).append(edge)
        return groups

    def text(self) -> str:
        vertices = " ".join(v.text() for v in self.vertices) or "1"
        edges = " ".join(e.text() for e in self.edges) or "-"
        return f"{vertices} | {edges}"

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        for index, vertex in enumerate(self.vertices):
            graph.add_node(index, key=vertex.sort_key())
        for edge in self.edges:
            graph.add_edge(edge.a, edge.b, tag=edge.tag.short(), ends=edge.ends, label=edge.label)
        return graph


def canonicalize(vertices: Sequence[Vertex], edges: Sequence[Edge]) -> Optional[Tuple[int, ContractionGraph]]:
    """
    规范形

    顶点按键排序，同键顶点之间枚举置换并取最小的边序列；
    若同一最小序列以相反符号出现，图在对称化下为零，返回 None
    """
    order = sorted(range(len(vertices)), key=lambda i: vertices[i].sort_key())
    groups: List[List[int]] = []
    for index in order:
        if groups and vertices[groups[-1][0]].sort_key() == vertices[index].sort_key():
            groups[-1].append(index)
        else:
            groups.append([index])

    best_key = None
    best_edges: Tuple[Edge, ...] = ()
    signs = set()
    for choice in itertools.product(*(itertools.permutations(group) for group in groups)):
        arrangement = [index for group in choice for index in group]
        position = {old: new for new, old in enumerate(arrangement)}
        sign = 1
        placed = []
        for edge in edges:
            s, moved = orient(edge, position[edge.a], position[edge.b])
            if moved.a == moved.b and moved.ends[0] == moved.ends[1] and moved.tag.orientation is Orientation.ANTISYMMETRIC:
                return None
            sign *= s
            placed.append(moved)
        placed.sort(key=Edge.sort_key)
        key = tuple(e.sort_key() for e in placed)
        if best_key is None or key < best_key:
            best_key, best_edges, signs = key, tuple(placed), {sign}
        elif key == best_key:
            signs.add(sign)
    if len(signs) > 1:
        return None
    canonical_vertices = tuple(vertices[i] for i in order)
    return signs.pop() if signs else 1, ContractionGraph(canonical_vertices, best_edges)


def edge_allowed(edge: Edge, vertices: Sequence[Vertex]) -> bool:
    """
    支集消失规则

    Δ_A(a,b) 要求 a 可能位于 b 的因果过去，Δ_R 相反，Δ 与 Δ_D 要求任一方向成立，
    δ 要求支集相交；支集未知时不剪枝
    """
    if edge.tag.vanishes_identically():
        return False
    first, second = vertices[edge.a].region, vertices[edge.b].region
    if first is None or second is None:
        return True
    rule = edge.tag.support_rule
    if rule is SupportRule.PAST:
        return first.may_precede(second)
    if rule is SupportRule.FUTURE:
        return second.may_precede(first)
    if rule is SupportRule.LIGHTCONE:
        return first.may_precede(second) or second.may_precede(first)
    if rule is SupportRule.COINCIDENCE:
        return first.intersects(second)
    return True


def graph_allowed(vertices: Sequence[Vertex], edges: Sequence[Edge]) -> bool:
    if any(v.region is not None and v.region.is_empty() for v in vertices):
        return False
    return all(edge_allowed(edge, vertices) for edge in edges)


class GraphSum:
    """
    规范图的有限线性组合

    系数为零的图与被支集规则剪掉的图在插入时丢弃
    """

    def __init__(self, dim: int = 4, test_functions: Optional[Mapping[str, TestFunction]] = None):
        self.dim = dim
        self.test_functions: Dict[str, TestFunction] = dict(test_functions or {})
        self._terms: Dict[ContractionGraph, ExactScalar] = {}

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    @classmethod
    def one(cls, dim: int = 4) -> "GraphSum":
        result = cls(dim)
        result.add(ExactScalar.one(), (), ())
        return result

    @classmethod
    def from_local(cls, functional: LocalFunctional) -> "GraphSum":
        """每个局域项成为一个单顶点图"""
        result = cls(functional.dim, functional.test_functions)
        for term in functional.terms:
            if term.weight(functional.dim) != 1:
                raise ValueError(f"非整数标度权重不能进入图表示: {term.text()}")
            region = _term_region(functional, term)
            vertex = Vertex(term.smearing, term.monomial, region, "", term.hbar, term.coupling, term.mass)
            result.add(term.coefficient, (vertex,), ())
        return result

    @classmethod
    def field_operator(cls, test_function: TestFunction, dim: int = 4,
                       coefficient: Any = 1) -> "GraphSum":
        """φ(Pf)：带 Klein-Gordon 算子的线性顶点"""
        result = cls(dim, {test_function.name: test_function})
        region = test_function.region if not test_function.region.is_empty() else None
        vertex = Vertex(Smearing((test_function.name,)), FieldMonomial(1, 0), region, "P")
        result.add(ExactScalar.coerce(coefficient), (vertex,), ())
        return result

    def empty_like(self) -> "GraphSum":
        return GraphSum(self.dim, self.test_functions)

    def add(self, coefficient: ExactScalar, vertices: Sequence[Vertex], edges: Sequence[Edge],
            prune: bool = True) -> None:
        """规范化后累加一项（原地）"""
        if coefficient.is_zero():
            return
        if prune and not graph_allowed(vertices, edges):
            return
        canonical = canonicalize(vertices, edges)
        if canonical is None:
            return
        sign, graph = canonical
        value = self._terms.get(graph, ExactScalar.zero()) + (coefficient if sign > 0 else -coefficient)
        if value.is_zero():
            self._terms.pop(graph, None)
        else:
            self._terms[graph] = value

    def add_graph(self, coefficient: ExactScalar, graph: ContractionGraph) -> None:
        self.add(coefficient, graph.vertices, graph.edges)

    # ------------------------------------------------------------------
    # 线性运算
    # ------------------------------------------------------------------

    def _merged_functions(self, other: "GraphSum") -> Dict[str, TestFunction]:
        functions = dict(self.test_functions)
        functions.update(other.test_functions)
        return functions

    def __add__(self, other: "GraphSum") -> "GraphSum":
        if not isinstance(other, GraphSum):
            return NotImplemented
        result = GraphSum(self.dim, self._merged_functions(other))
        for graph, value in itertools.chain(self.items(), other.items()):
            result.add_graph(value, graph)
        return result

    def __neg__(self) -> "GraphSum":
        return self.scale(-1)

    def __sub__(self, other: "GraphSum") -> "GraphSum":
        return self + (-other)

    def scale(self, factor: Any) -> "GraphSum":
        factor = ExactScalar.coerce(factor)
        result = self.empty_like()
        for graph, value in self.items():
            result.add_graph(value * factor, graph)
        return result

    def conj(self) -> "GraphSum":
        """系数复共轭；调用方负责先把非实核展开到实基"""
        result = self.empty_like()
        for graph, value in self.items():
            result.add_graph(value.conj(), graph)
        return result

    def filter(self, predicate: Callable[[ContractionGraph], bool]) -> "GraphSum":
        result = self.empty_like()
        for graph, value in self.items():
            if predicate(graph):
                result.add_graph(value, graph)
        return result

    def coupling_part(self, n: int) -> "GraphSum":
        return self.filter(lambda g: g.coupling == n)

    def truncate(self, hbar_max: Optional[int] = None, coupling_max: Optional[int] = None) -> "GraphSum":
        return self.filter(lambda g: (hbar_max is None or g.hbar <= hbar_max)
                           and (coupling_max is None or g.coupling <= coupling_max))

    def map_graphs(self, fn: Callable[[ContractionGraph], Iterable[Tuple[ExactScalar, Sequence[Vertex], Sequence[Edge]]]]) -> "GraphSum":
        """逐图替换：fn 返回 (因子, 顶点, 边) 列表"""
        result = self.empty_like()
        for graph, value in self.items():
            for factor, vertices, edges in fn(graph):
                result.add(value * factor, vertices, edges)
        return result

    def map_coefficients(self, fn: Callable[[ExactScalar], ExactScalar]) -> "GraphSum":
        result = self.empty_like()
        for graph, value in self.items():
            result.add_graph(fn(value), graph)
        return result

    # ------------------------------------------------------------------
    # 访问
    # ------------------------------------------------------------------

    def items(self) -> Iterator[Tuple[ContractionGraph, ExactScalar]]:
        return iter(sorted(self._terms.items(), key=lambda item: item[0].sort_key()))

    def graphs(self) -> List[ContractionGraph]:
        return [graph for graph, _ in self.items()]

    def coefficient(self, graph: ContractionGraph) -> ExactScalar:
        return self._terms.get(graph, ExactScalar.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def unit_coefficient(self) -> ExactScalar:
        return self._terms.get(ContractionGraph((), ()), ExactScalar.zero())

    def dump(self) -> List[str]:
        """确定性的调试行: "顶点 | 边(标签, 端点, 导数) | 系数" """
        return [f"{graph.text()} | {value.to_text()}" for graph, value in self.items()]

    def __repr__(self) -> str:
        return "GraphSum(" + "; ".join(self.dump()) + ")"

    # ------------------------------------------------------------------
    # 转换
    # ------------------------------------------------------------------

    def to_local(self, order: int = 0) -> LocalFunctional:
        """
        把局域化图（单顶点、无边）转换为局域泛函

        Raises:
            NonLocalResidueError: 存在带边或多顶点的图
        """
        residue = [graph.text() for graph, _ in self.items() if not graph.is_localized()]
        if residue:
            raise NonLocalResidueError(order, residue)
        terms = []
        for graph, value in self.items():
            vertex = graph.vertices[0]
            terms.append(LocalTerm(vertex.monomial, value, vertex.smearing, vertex.hbar,
                                   vertex.coupling, vertex.mass))
        return LocalFunctional(terms, self.dim, self.test_functions)


def _term_region(functional: LocalFunctional, term: LocalTerm) -> Optional[SupportRegion]:
    """抽象测试函数没有具体支集，此时不参与剪枝"""
    slots = term.smearing.slots
    if not slots or any(functional.test_functions[s].region.is_empty() for s in slots):
        return None
    return functional.term_support(term)


def vertex_region_product(first: Optional[SupportRegion], second: Optional[SupportRegion]) -> Optional[SupportRegion]:
    if first is None:
        return second
    if second is None:
        return first
    return first.intersection(second)


def merge_vertices(first: Vertex, second: Vertex) -> Tuple[Any, Vertex]:
    """
    两个顶点在重合点合并：剩余腿按归一化乘积合并，抹平因子拼接

    Returns:
        (Fraction, Vertex): 乘积的二项式因子与合并后的顶点
    """
    factor, monomial = first.monomial.product(second.monomial)
    if first.operator or second.operator:
        raise ValueError("带算子的顶点不能合并")
    smearing = first.smearing.merged(second.smearing)
    vertex = Vertex(smearing, monomial, vertex_region_product(first.region, second.region), "",
                    first.hbar + second.hbar, first.coupling + second.coupling,
                    first.mass + second.mass)
    return factor, vertex


def constant_vertex(test_function: TestFunction) -> Vertex:
    region = test_function.region if not test_function.region.is_empty() else None
    return Vertex(Smearing((test_function.name,)), ONE, region)
