"""
支集区域模块
以轴对齐闭盒的有限并表示时空支集，坐标 0 为时间

主要功能：
1. 相交、不相交与因果先后谓词
2. "晚于" 关系: A 的任何点都不在 B 的因果过去中
3. 网格覆盖与交图上的团（用于支集分解）

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from services.common.errors import SupportPreconditionError

logger = logging.getLogger("pqft.functionals.support")


@dataclass(frozen=True)
class Box:
    """闭盒 [lower, upper]，坐标 0 为时间"""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError(f"盒的上下界维数不一致: {self.lower} / {self.upper}")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError(f"盒的下界大于上界: {self.lower} / {self.upper}")

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, point: Sequence[float]) -> bool:
        return all(lo <= p <= hi for lo, p, hi in zip(self.lower, point, self.upper))

    def intersects(self, other: "Box") -> bool:
        return all(lo1 <= hi2 and lo2 <= hi1 for lo1, hi1, lo2, hi2
                   in zip(self.lower, self.upper, other.lower, other.upper))

    def intersection(self, other: "Box"):
        if not self.intersects(other):
            return None
        return Box(tuple(max(a, b) for a, b in zip(self.lower, other.lower)),
                   tuple(min(a, b) for a, b in zip(self.upper, other.upper)))

    def within(self, other: "Box") -> bool:
        return all(lo2 <= lo1 and hi1 <= hi2 for lo1, hi1, lo2, hi2
                   in zip(self.lower, self.upper, other.lower, other.upper))

    def spatial_distance(self, other: "Box") -> float:
        """空间坐标（1..d−1）上的最小欧氏距离"""
        total = 0.0
        for i in range(1, self.dim):
            gap = max(0.0, other.lower[i] - self.upper[i], self.lower[i] - other.upper[i])
            total += gap * gap
        return math.sqrt(total)

    def may_precede(self, other: "Box") -> bool:
        """存在 x ∈ self, y ∈ other 使 x 位于 y 的因果过去（含光锥）"""
        return other.upper[0] - self.lower[0] >= self.spatial_distance(other)

    def enlarged(self, margin: float) -> "Box":
        return Box(tuple(lo - margin for lo in self.lower), tuple(hi + margin for hi in self.upper))


@dataclass(frozen=True)
class SupportRegion:
    """闭盒的有限并；空元组表示空集"""
    boxes: Tuple[Box, ...] = ()

    @classmethod
    def empty(cls) -> "SupportRegion":
        return cls(())

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float]) -> "SupportRegion":
        return cls((Box(tuple(float(v) for v in lower), tuple(float(v) for v in upper)),))

    @classmethod
    def point(cls, coords: Sequence[float]) -> "SupportRegion":
        coords = tuple(float(v) for v in coords)
        return cls((Box(coords, coords),))

    @classmethod
    def ball(cls, center: Sequence[float], radius: float) -> "SupportRegion":
        """以外接盒近似球形支集"""
        return cls.box([c - radius for c in center], [c + radius for c in center])

    def is_empty(self) -> bool:
        return not self.boxes

    @property
    def dim(self) -> int:
        return self.boxes[0].dim if self.boxes else 0

    def union(self, other: "SupportRegion") -> "SupportRegion":
        merged = list(self.boxes)
        for box in other.boxes:
            if box not in merged:
                merged.append(box)
        return SupportRegion(tuple(merged))

    __or__ = union

    def intersection(self, other: "SupportRegion") -> "SupportRegion":
        pieces = []
        for a, b in itertools.product(self.boxes, other.boxes):
            piece = a.intersection(b)
            if piece is not None and piece not in pieces:
                pieces.append(piece)
        return SupportRegion(tuple(pieces))

    __and__ = intersection

    def contains(self, point: Sequence[float]) -> bool:
        return any(box.contains(point) for box in self.boxes)

    def intersects(self, other: "SupportRegion") -> bool:
        return any(a.intersects(b) for a, b in itertools.product(self.boxes, other.boxes))

    def disjoint(self, other: "SupportRegion") -> bool:
        return not self.intersects(other)

    def subset_of(self, other: "SupportRegion") -> bool:
        """逐盒判断包含（保守: 跨越多个盒的盒判为不包含）"""
        return all(any(box.within(big) for big in other.boxes) for box in self.boxes)

    def may_precede(self, other: "SupportRegion") -> bool:
        """self 中是否有点位于 other 某点的因果过去"""
        return any(a.may_precede(b) for a, b in itertools.product(self.boxes, other.boxes))

    def later_than(self, other: "SupportRegion") -> bool:
        """self 晚于 other: self 与 other 的因果过去不相交"""
        if self.is_empty() or other.is_empty():
            return True
        return not self.may_precede(other)

    def spacelike_to(self, other: "SupportRegion") -> bool:
        return self.later_than(other) and other.later_than(self)

    def bounding_box(self) -> Box:
        if not self.boxes:
            raise SupportPreconditionError("空集没有外接盒", relation="bounding_box")
        dim = self.dim
        return Box(tuple(min(b.lower[i] for b in self.boxes) for i in range(dim)),
                   tuple(max(b.upper[i] for b in self.boxes) for i in range(dim)))

    def descriptor(self) -> List[Dict[str, List[float]]]:
        return [{"lower": list(b.lower), "upper": list(b.upper)} for b in self.boxes]


def require_later(a: SupportRegion, b: SupportRegion, relation: str = "later") -> None:
    """
    断言 a 晚于 b

    Raises:
        SupportPreconditionError: 支集重叠或因果顺序不成立
    """
    if not a.later_than(b):
        raise SupportPreconditionError(f"支集不满足晚于关系: {a.descriptor()} / {b.descriptor()}",
                                       relation=relation)


def cover_grid(region: SupportRegion, cells_per_axis: int, overlap: float = 0.25) -> List[SupportRegion]:
    """
    用重叠的网格小盒覆盖 region 的外接盒

    Args:
        region: 待覆盖区域
        cells_per_axis: 每个坐标方向的格数
        overlap: 相邻格的重叠占格宽的比例，需小于 0.5，保证非相邻格不相交

    Returns:
        List[SupportRegion]: 网格单元
    """
    if not 0 < overlap < 0.5:
        raise ValueError(f"重叠比例必须在 (0, 0.5) 内: {overlap}")
    outer = region.bounding_box()
    widths = [(hi - lo) / cells_per_axis for lo, hi in zip(outer.lower, outer.upper)]
    cells = []
    for index in itertools.product(range(cells_per_axis), repeat=outer.dim):
        lower = [outer.lower[i] + index[i] * widths[i] - overlap * widths[i] for i in range(outer.dim)]
        upper = [outer.lower[i] + (index[i] + 1) * widths[i] + overlap * widths[i] for i in range(outer.dim)]
        cells.append(SupportRegion.box(lower, upper))
    return cells


def intersection_graph(cells: Sequence[SupportRegion]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(cells)))
    for i, j in itertools.combinations(range(len(cells)), 2):
        if cells[i].intersects(cells[j]):
            graph.add_edge(i, j)
    return graph


def clique_signs(cells: Sequence[SupportRegion]) -> Dict[FrozenSet[int], int]:
    """
    交图上的容斥符号

    s_K = Σ_{J ⊇ K, J 为团} (−1)^{|J|−|K|}，只返回非零符号
    """
    graph = intersection_graph(cells)
    cliques = [frozenset(c) for c in nx.enumerate_all_cliques(graph)]
    signs: Dict[FrozenSet[int], int] = {}
    for clique in cliques:
        sign = sum((-1) ** (len(other) - len(clique)) for other in cliques if clique <= other)
        if sign:
            signs[clique] = sign
    logger.debug(f"团数 {len(cliques)}，非零符号 {len(signs)}")
    return signs


def union_all(regions: Iterable[SupportRegion]) -> SupportRegion:
    result = SupportRegion.empty()
    for region in regions:
        result = result.union(region)
    return result
