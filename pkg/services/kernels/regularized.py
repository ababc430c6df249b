"""
正则化核族模块
定义 h_Λ 族及其在 d=4 欧氏区域的数值求值

主要功能：
1. shifted 族: x² → x² − 1/Λ² 的 D_F 移位分母
2. gaussian 族: (1 − e^{−Λ²r²})/(4π²r²)
3. 标度关系 h_Λ(x) = Λ^{d−2} h₁(Λx) 的检查
4. Regularized 标签构造及 Λ → ∞ 的抽象极限

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from services.exact import ExactScalar
from .catalog import KernelExpr, KernelKind, KernelTag

logger = logging.getLogger("pqft.kernels.regularized")


@dataclass(frozen=True)
class RegularizedFamily:
    """
    正则化族 h_Λ

    profile(s) 为 Λ=1 的欧氏径向剖面 h₁(s)，derivative(cutoff, r) 为 ∂_Λ h_Λ(r)
    """
    name: str
    description: str
    profile: Callable[[float], float]
    derivative: Callable[[float, float], float]
    dim: int = 4

    def evaluate(self, cutoff: float, r: float) -> float:
        """h_Λ(r) = Λ^{d−2} h₁(Λr)，Λ=0 时恒为零"""
        if cutoff == 0:
            return 0.0
        return cutoff ** (self.dim - 2) * self.profile(cutoff * r)

    def scaling_check(self, cutoff: float, rho: float, r: float, tolerance: float = 1e-12) -> bool:
        """h_{ρΛ}(r) = ρ^{d−2} h_Λ(ρr)"""
        left = self.evaluate(rho * cutoff, r)
        right = rho ** (self.dim - 2) * self.evaluate(cutoff, rho * r)
        return abs(left - right) <= tolerance * max(1.0, abs(left))


def _shifted_profile(s: float) -> float:
    return 1.0 / (4 * math.pi ** 2 * (s * s + 1.0))


def _shifted_derivative(cutoff: float, r: float) -> float:
    if cutoff == 0:
        return 0.0
    shift = cutoff ** -2
    return 2 * cutoff ** -3 / (4 * math.pi ** 2 * (r * r + shift) ** 2)


def _gaussian_profile(s: float) -> float:
    if s < 1e-8:
        # 小 s 展开，避免 0/0
        return (1.0 - s * s / 2) / (4 * math.pi ** 2)
    return -math.expm1(-s * s) / (4 * math.pi ** 2 * s * s)


def _gaussian_derivative(cutoff: float, r: float) -> float:
    return 2 * cutoff * math.exp(-(cutoff * r) ** 2) / (4 * math.pi ** 2)


FAMILIES: Dict[str, RegularizedFamily] = {
    "shifted": RegularizedFamily(
        name="shifted",
        description="D_F 在 x² → x² − 1/Λ² 处求值",
        profile=_shifted_profile,
        derivative=_shifted_derivative,
    ),
    "gaussian": RegularizedFamily(
        name="gaussian",
        description="(1 − e^{−Λ²r²})/(4π²r²) 高斯软化",
        profile=_gaussian_profile,
        derivative=_gaussian_derivative,
    ),
}


def get_family(name: str) -> RegularizedFamily:
    """
    按名称获取正则化族

    Raises:
        ValueError: 不支持的正则化族
    """
    family = FAMILIES.get(name)
    if family is None:
        raise ValueError(f"不支持的正则化族: {name}，可用: {sorted(FAMILIES)}")
    return family


def get_available_families() -> List[str]:
    return sorted(FAMILIES)


def regularized_tag(family: str = "shifted", cutoff: Optional[Fraction] = None,
                    subtract_hadamard: bool = True, dim: int = 4, sig: int = 3) -> KernelTag:
    """
    Regularized 边标签

    subtract_hadamard 为真时表示 k_Λ = h_Λ − H，否则表示 h_Λ 本身（Λ=0 时恒为零）
    """
    get_family(family)
    return KernelTag(KernelKind.REGULARIZED, dim=dim, sig=sig, family=family,
                     cutoff=None if cutoff is None else Fraction(cutoff),
                     subtract_hadamard=subtract_hadamard)


def regularized_dot_tag(tag: KernelTag) -> KernelTag:
    """k̇_Λ：同一族的形式 Λ 导数，H 不依赖 Λ，因此两种表示的导数相同"""
    if tag.kind is not KernelKind.REGULARIZED:
        raise ValueError(f"只能对 Regularized 标签求 Λ 导数: {tag.short()}")
    return replace(tag, kind=KernelKind.REGULARIZED_DOT, subtract_hadamard=True)


def regularized_limit(tag: KernelTag) -> KernelExpr:
    """
    Λ → ∞ 的抽象极限

    k_Λ = h_Λ − H → iΔ_D；h_Λ → H_F
    """
    if tag.kind is not KernelKind.REGULARIZED:
        raise ValueError(f"不是 Regularized 标签: {tag.short()}")
    if tag.subtract_hadamard:
        target = KernelTag(KernelKind.DELTA_DIRAC, dim=tag.dim, sig=tag.sig)
        return KernelExpr(ExactScalar.i(), (target,))
    target = KernelTag(KernelKind.FEYNMAN_H, dim=tag.dim, sig=tag.sig)
    return KernelExpr(ExactScalar.one(), (target,))
