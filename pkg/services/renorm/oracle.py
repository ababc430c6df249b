"""
欧氏标度数值检验模块
在 s=0 下用径向积分独立验证 c₀ = |S^{d−1}|

主要功能：
1. 径向测试剖面（高斯、紧支 bump）
2. 参考尺度减除的延拓 F(ρ) = |S|∫(ψ(r/ρ) − ψ(0)θ(1−r))/r dr
3. ρ d/dρ F 的 Richardson 外推
4. 独立的角向求积 |S^{d−1}| = 2π∏∫₀^π sin^jθ dθ

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import integrate, special

from services.common.errors import QuadratureError

logger = logging.getLogger("pqft.renorm.oracle")


@dataclass(frozen=True)
class RadialProfile:
    """径向测试函数 ψ(r)"""
    name: str
    fn: Callable[[float], float]
    support: float = math.inf

    def __call__(self, r: float) -> float:
        return self.fn(r)


def _gaussian(r: float) -> float:
    return math.exp(-r * r)


def _bump(r: float) -> float:
    if r >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - r * r))


PROFILES: Dict[str, RadialProfile] = {
    "gaussian": RadialProfile("gaussian", _gaussian),
    "bump": RadialProfile("bump", _bump, support=1.0),
}


def get_profile(name: str) -> RadialProfile:
    """
    剖面工厂

    Raises:
        ValueError: 不支持的剖面
    """
    if name not in PROFILES:
        raise ValueError(f"不支持的剖面: {name}，可用: {sorted(PROFILES)}")
    return PROFILES[name]


def angular_volume(d: int) -> float:
    """|S^{d−1}| 的逐角积分，与闭式 2π^{d/2}/Γ(d/2) 独立"""
    if d < 2:
        raise ValueError(f"维数必须 ≥ 2: {d}")
    volume = 2 * math.pi
    for j in range(1, d - 1):
        value, _ = integrate.quad(lambda theta: math.sin(theta) ** j, 0.0, math.pi, epsabs=1e-14)
        volume *= value
    return volume


def sphere_volume_float(d: float) -> float:
    return 2 * math.pi ** (d / 2) / special.gamma(d / 2)


class EuclideanScalingOracle:
    """
    |x|^{−d} 在 ℝ^d 上的减除延拓

    t(ψ) = |S|∫₀^∞ (ψ(r) − ψ(0)θ(1−r)) r^{−1} dr，F(ρ) = ⟨ρ^d t(ρ·), ψ⟩
    """

    def __init__(self, d: float, profile: RadialProfile, tolerance: float = 1e-6):
        self.d = d
        self.profile = profile
        self.tolerance = tolerance
        self.logger = logging.getLogger("pqft.renorm.oracle.EuclideanScalingOracle")
        self.volume = angular_volume(int(d)) if float(d).is_integer() else sphere_volume_float(d)

    def _radial(self, rho: float) -> float:
        psi0 = self.profile(0.0)
        inner = lambda r: (self.profile(r / rho) - psi0) / r
        outer = lambda r: self.profile(r / rho) / r
        upper = rho * self.profile.support if math.isfinite(self.profile.support) else math.inf
        points = (rho,) if upper < 1.0 else None
        total, error = integrate.quad(inner, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200,
                                      points=points)
        if upper > 1.0:
            tail, tail_error = integrate.quad(outer, 1.0, upper, epsabs=1e-13, epsrel=1e-13, limit=200)
            total += tail
            error += tail_error
        if error > self.tolerance * 1e-2:
            raise QuadratureError(f"径向积分未收敛: ρ={rho}", integrand=self.profile.name,
                                  error_estimate=error)
        return total

    def pairing(self, rho: float) -> float:
        """F(ρ)"""
        return self.volume * self._radial(rho)

    def log_derivative(self, step: float = 0.2, levels: int = 4) -> float:
        """ρ d/dρ F 在 ρ=1 处：对 log ρ 的中心差分做 Richardson 外推"""
        table: List[float] = []
        h = step
        for _ in range(levels):
            table.append((self.pairing(math.exp(h)) - self.pairing(math.exp(-h))) / (2 * h))
            h /= 2
        estimates = np.array(table)
        power = 4
        for _ in range(levels - 1):
            estimates = (power * estimates[1:] - estimates[:-1]) / (power - 1)
            power *= 4
        return float(estimates[0])

    def coefficient(self) -> float:
        """ψ(0) 的系数，应等于 |S^{d−1}|"""
        value = self.log_derivative() / self.profile(0.0)
        self.logger.debug(f"d={self.d}, 剖面 {self.profile.name}: 系数 {value:.12f}")
        return value


def euclidean_scaling_oracle(d: float, p: Optional[float] = None, profile: str = "gaussian",
                             tolerance: float = 1e-6) -> float:
    """
    数值标度破坏系数

    Args:
        d: 维数（允许 2、3、4、…）
        p: 幂 |x|^{−2p}，须满足 2p = d
        profile: 径向剖面名
        tolerance: 求积容差

    Raises:
        ValueError: 2p ≠ d（ω ≠ 0）
    """
    p = d / 2 if p is None else p
    if abs(2 * p - d) > 1e-12:
        raise ValueError(f"欧氏检验只覆盖 ω=0: 2p={2 * p}, d={d}")
    oracle = EuclideanScalingOracle(d, get_profile(profile), tolerance)
    value = oracle.coefficient()
    expected = sphere_volume_float(d)
    marker = "✅" if abs(value - expected) <= tolerance * max(1.0, expected) else "❌"
    logger.info(f"{marker} 欧氏标度检验 d={d}: {value:.10f} (|S^{{d-1}}| = {expected:.10f})")
    return value
