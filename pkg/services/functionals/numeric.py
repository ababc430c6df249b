"""
数值配对模块
在规则网格上对局域泛函做数值求值，供可加性与支集分解检查使用

主要功能：
1. 规则网格上的 Riemann 求和与梯度
2. 光滑紧支撑 bump 剖面（中心/半径/高度）
3. bump 叠加的场位形
4. 网格单元上的单位分解

作者: Assistant
创建时间: 2024年
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from .support import SupportRegion

logger = logging.getLogger("pqft.functionals.numeric")


@dataclass(frozen=True)
class Grid:
    """规则网格，坐标 0 为时间"""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    points: int = 41

    @property
    def dim(self) -> int:
        return len(self.lower)

    @cached_property
    def axes(self) -> List[np.ndarray]:
        return [np.linspace(lo, hi, self.points) for lo, hi in zip(self.lower, self.upper)]

    @cached_property
    def coordinates(self) -> np.ndarray:
        """形状 (dim, points, …, points) 的坐标数组"""
        return np.stack(np.meshgrid(*self.axes, indexing="ij"))

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / (self.points - 1) for lo, hi in zip(self.lower, self.upper))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.sum(values) * self.cell_volume)

    def gradient(self, values: np.ndarray) -> List[np.ndarray]:
        if self.dim == 1:
            return [np.gradient(values, self.spacing[0])]
        return list(np.gradient(values, *self.spacing))

    def minkowski_square(self, values: np.ndarray) -> np.ndarray:
        """∂_νφ∂^νφ，号差 (+,−,…,−)"""
        grads = self.gradient(values)
        total = grads[0] ** 2
        for g in grads[1:]:
            total = total - g ** 2
        return total


@dataclass(frozen=True)
class BumpProfile:
    """
    光滑紧支撑 bump

    b(x) = height · exp(1 − 1/(1 − |x−c|²/r²))，|x−c| < r，其余为零；中心值为 height
    """
    center: Tuple[float, ...]
    radius: float = 1.0
    height: float = 1.0

    def values(self, coords: np.ndarray) -> np.ndarray:
        shape = coords.shape[1:]
        center = np.asarray(self.center, dtype=float).reshape((-1,) + (1,) * len(shape))
        q = np.sum((coords - center) ** 2, axis=0) / self.radius ** 2
        out = np.zeros(shape)
        inside = q < 1.0
        out[inside] = self.height * np.exp(1.0 - 1.0 / (1.0 - q[inside]))
        return out

    def on(self, grid: Grid) -> np.ndarray:
        return self.values(grid.coordinates)

    @property
    def region(self) -> SupportRegion:
        return SupportRegion.ball(self.center, self.radius)


@dataclass(frozen=True)
class FieldConfiguration:
    """bump 剖面的有限和"""
    bumps: Tuple[BumpProfile, ...] = field(default_factory=tuple)

    @classmethod
    def zero(cls) -> "FieldConfiguration":
        return cls(())

    @classmethod
    def single(cls, center: Sequence[float], radius: float = 1.0,
               height: float = 1.0) -> "FieldConfiguration":
        return cls((BumpProfile(tuple(center), radius, height),))

    def __add__(self, other: "FieldConfiguration") -> "FieldConfiguration":
        return FieldConfiguration(self.bumps + other.bumps)

    def on(self, grid: Grid) -> np.ndarray:
        total = np.zeros(grid.coordinates.shape[1:])
        for bump in self.bumps:
            total = total + bump.on(grid)
        return total

    @property
    def region(self) -> SupportRegion:
        region = SupportRegion.empty()
        for bump in self.bumps:
            region = region.union(bump.region)
        return region


def partition_of_unity(grid: Grid, cells: Sequence[SupportRegion]) -> List[np.ndarray]:
    """
    网格单元上的光滑单位分解 χ_i = w_i / Σ w_j

    w_i 为单元内切 bump；各单元并集之外 Σ χ_i = 0
    """
    weights = []
    for cell in cells:
        box = cell.bounding_box()
        center = tuple((lo + hi) / 2 for lo, hi in zip(box.lower, box.upper))
        half = np.array([(hi - lo) / 2 for lo, hi in zip(box.lower, box.upper)])
        scaled = (grid.coordinates - np.asarray(center).reshape((-1,) + (1,) * grid.dim)) \
            / half.reshape((-1,) + (1,) * grid.dim)
        # 各轴乘积型 bump，支撑恰为单元盒
        w = np.ones(grid.coordinates.shape[1:])
        for axis in range(grid.dim):
            t = scaled[axis] ** 2
            inside = t < 1.0
            factor = np.zeros_like(t)
            factor[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside]))
            w = w * factor
        weights.append(w)
    total = np.sum(weights, axis=0)
    safe = np.where(total > 0, total, 1.0)
    return [np.where(total > 0, w / safe, 0.0) for w in weights]
