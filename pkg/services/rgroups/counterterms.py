"""
抵消项提取模块
φ² 模型 (d=4) 的 Wilson 数值实验：S_Λ∘Z_Λ → S 的抵消项与由此恢复的 Z(ρ)

主要功能：
1. 欧氏配对 E(Λ) = ∫d⁴x g(|x|) h_Λ(|x|)²，g 为高斯测试函数的自相关
2. 在 Λ 网格上以 {1, log Λ} 为基做最小二乘拟合
3. Z_Λ⁽²⁾ = −(log Λ 系数)·局域项，并恢复 Z(ρ) = A(ρΛ) − A(Λ)
4. 与 gml_cocycle 给出的精确 log ρ 斜率比较，检查不同正则化族的斜率一致

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import integrate

from services.common.errors import FitResidualError, QuadratureError
from services.exact import Atom, ExactScalar, to_decimal
from services.functionals import ONE, PHI2, LocalFunctional, TestFunction
from services.kernels import get_family
from .cocycle import gml_cocycle
from .smatrix import ExtensionTable

logger = logging.getLogger("pqft.rgroups.counterterms")

DEFAULT_LAMBDA_GRID = tuple(10 ** (1 + 0.5 * k) for k in range(5))
DEFAULT_FAMILIES = ("shifted", "gaussian")
DEFAULT_RHOS = (1.0, 2.0, 10.0)

# 鱼图对 ∫f² 的系数 c = −g²，Wick 转动给出因子 i^{d−1}
_FISH_WICK_FACTOR = 1j ** 3


def fish_interaction(test_function: TestFunction, coupling: Any = 1, dim: int = 4) -> LocalFunctional:
    """V = (ig/ħ)∫f φ²：归一化单项式 φ²/2! 上系数 2ig，耦合阶 1、ħ 幂 −1"""
    coefficient = ExactScalar.i() * 2 * ExactScalar.coerce(coupling)
    return LocalFunctional.monomial(PHI2, test_function, coefficient, dim=dim, hbar=-1, coupling=1)


def exact_log_slope(dim: int = 4) -> ExactScalar:
    """
    Z(ρ)(V) 中 ∫f² 项的 log ρ 系数（g=1）

    由参照延拓表的 Gell-Mann–Low 余环精确给出，应为 i/(8π²)
    """
    functional = fish_interaction(TestFunction("f"), dim=dim)
    image = gml_cocycle(ExtensionTable.reference(dim), 2).apply(functional)
    slope = ExactScalar.zero()
    for term in image.terms:
        if term.monomial == ONE and term.coupling == 2 and term.mass == 0:
            slope = slope + term.coefficient.derivative(Atom.LOG_RHO)
    return slope


def gaussian_autocorrelation(r: float, sigma: float) -> float:
    """f(x) = e^{−|x|²/(2σ²)} 在 d=4 的自相关 g(r) = (πσ²)² e^{−r²/(4σ²)}"""
    return (math.pi * sigma ** 2) ** 2 * math.exp(-r * r / (4 * sigma ** 2))


@dataclass
class PairingSample:
    """单个 Λ 上的欧氏配对"""
    cutoff: float
    value: float
    error: float


def euclidean_pairing(family_name: str, cutoff: float, sigma: float = 10.0,
                      tolerance: float = 1e-10) -> PairingSample:
    """
    E(Λ) = 2π² ∫ r³ g(r) h_Λ(r)² dr

    在 t = log r 上积分，区间覆盖 [10⁻⁶/Λ, 12σ]

    Raises:
        QuadratureError: 积分误差估计超过容差
    """
    family = get_family(family_name)

    def integrand(t: float) -> float:
        r = math.exp(t)
        h = family.evaluate(cutoff, r)
        return 2 * math.pi ** 2 * r ** 4 * gaussian_autocorrelation(r, sigma) * h * h

    lower = math.log(1e-6 / cutoff)
    upper = math.log(12 * sigma)
    breaks = [p for p in (math.log(1.0 / cutoff), math.log(sigma)) if lower < p < upper]
    value, error = integrate.quad(integrand, lower, upper, points=breaks or None, limit=400,
                                  epsabs=0.0, epsrel=tolerance)
    if error > max(100 * tolerance * abs(value), 1e-14):
        raise QuadratureError("欧氏配对积分未收敛", integrand=f"E_{family_name}({cutoff:g})",
                              error_estimate=error)
    return PairingSample(cutoff, value, error)


@dataclass
class CountertermFit:
    """单个正则化族的拟合结果"""
    family: str
    samples: List[PairingSample]
    intercept: float
    slope: float
    residual: float
    amplitude_slope: complex
    expected_slope: complex
    recovered: Dict[float, complex] = field(default_factory=dict)

    @property
    def relative_error(self) -> float:
        return abs(self.amplitude_slope - self.expected_slope) / abs(self.expected_slope)

    def amplitude(self, cutoff: float) -> complex:
        """拟合后的 A(Λ) = i^{d−1}(−g²)(intercept + slope·log Λ)"""
        return _FISH_WICK_FACTOR * -1 * (self.intercept + self.slope * math.log(cutoff))

    def counterterm(self, cutoff: float) -> complex:
        """Z_Λ⁽²⁾ 在 ∫f² 上的系数：−(log Λ 系数)·log Λ"""
        return -self.amplitude_slope * math.log(cutoff)

    def descriptor(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "samples": [{"lambda": s.cutoff, "E": s.value, "error": s.error} for s in self.samples],
            "intercept": self.intercept,
            "slope": self.slope,
            "residual": self.residual,
            "amplitude_slope": [self.amplitude_slope.real, self.amplitude_slope.imag],
            "expected_slope": [self.expected_slope.real, self.expected_slope.imag],
            "relative_error": self.relative_error,
            "recovered": {f"{rho:g}": [z.real, z.imag] for rho, z in sorted(self.recovered.items())},
        }


@dataclass
class CountertermResult:
    """counterterm_extraction 的汇总"""
    fits: Dict[str, CountertermFit]
    exact_slope: ExactScalar
    norm: float
    tolerance: float

    @property
    def slope_spread(self) -> float:
        """不同族之间 log 斜率的最大相对差"""
        slopes = [fit.amplitude_slope for fit in self.fits.values()]
        if len(slopes) < 2:
            return 0.0
        reference = abs(slopes[0])
        return max(abs(a - b) for a in slopes for b in slopes) / reference

    @property
    def finite_parts(self) -> Dict[str, float]:
        return {name: fit.intercept for name, fit in self.fits.items()}

    def recovery_error(self, fit: CountertermFit) -> float:
        """恢复的 Z(ρ) 与 (精确斜率·∫f²)·log ρ 的最大偏差，相对 ∫f²/(8π²) 计"""
        scale = abs(fit.expected_slope)
        return max((abs(z - fit.expected_slope * math.log(rho)) / scale
                    for rho, z in fit.recovered.items()), default=0.0)

    @property
    def passed(self) -> bool:
        return (all(fit.relative_error <= self.tolerance for fit in self.fits.values())
                and self.slope_spread <= self.tolerance
                and all(self.recovery_error(fit) <= self.tolerance for fit in self.fits.values()))

    def descriptor(self) -> Dict[str, Any]:
        return {
            "exact_slope": {"symbolic": self.exact_slope.to_text(),
                            "decimal": to_decimal(self.exact_slope)},
            "norm": self.norm,
            "tolerance": self.tolerance,
            "slope_spread": self.slope_spread,
            "finite_parts": self.finite_parts,
            "recovery_error": {name: self.recovery_error(fit) for name, fit in self.fits.items()},
            "fits": {name: fit.descriptor() for name, fit in self.fits.items()},
            "passed": self.passed,
        }


def fit_log_slope(samples: Sequence[PairingSample], tolerance: float) -> tuple:
    """
    以 {1, log Λ} 为基的最小二乘

    Returns:
        tuple: (intercept, slope, 相对残差)

    Raises:
        FitResidualError: 相对残差超过容差（族不是对数正则的）
    """
    logs = np.log([s.cutoff for s in samples])
    values = np.array([s.value for s in samples])
    slope, intercept = np.polyfit(logs, values, 1)
    fitted = intercept + slope * logs
    residual = float(np.max(np.abs(values - fitted)) / np.max(np.abs(values)))
    if residual > tolerance:
        raise FitResidualError(residual, tolerance)
    return float(intercept), float(slope), residual


def _fit_family(family: str, grid: Sequence[float], sigma: float, tolerance: float,
                expected: complex, rhos: Sequence[float], workers: int) -> CountertermFit:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda c: euclidean_pairing(family, c, sigma), grid))
    else:
        samples = [euclidean_pairing(family, c, sigma) for c in grid]
    intercept, slope, residual = fit_log_slope(samples, tolerance)
    amplitude_slope = _FISH_WICK_FACTOR * -1 * slope
    fit = CountertermFit(family, samples, intercept, slope, residual, amplitude_slope, expected)
    # Z(ρ) ≈ A(ρΛ) − A(Λ)，Λ 取网格最大值
    top = grid[-1]
    base = _FISH_WICK_FACTOR * -1 * samples[-1].value
    for rho in rhos:
        scaled = euclidean_pairing(family, rho * top, sigma)
        fit.recovered[rho] = _FISH_WICK_FACTOR * -1 * scaled.value - base
    marker = "✅" if fit.relative_error <= tolerance else "❌"
    logger.info(f"{marker} {family}: log 斜率相对误差 {fit.relative_error:.2e}, 拟合残差 {residual:.2e}")
    return fit


def counterterm_extraction(lambda_grid: Optional[Sequence[float]] = None,
                           families: Sequence[str] = DEFAULT_FAMILIES, sigma: float = 10.0,
                           tolerance: float = 1e-4, rhos: Sequence[float] = DEFAULT_RHOS,
                           workers: int = 1) -> CountertermResult:
    """
    φ² 模型 d=4 的抵消项提取

    Args:
        lambda_grid: Λ 网格，默认 10^{1, 1.5, …, 3}
        families: 正则化族名称
        sigma: 高斯测试函数宽度
        tolerance: 拟合残差与斜率比较的相对容差
        rhos: 恢复 Z(ρ) 的 ρ 取值
        workers: 并行求积线程数

    Returns:
        CountertermResult: 各族的拟合与恢复的 Z(ρ)

    Raises:
        FitResidualError: 某个族的拟合残差超过容差
        ValueError: 不支持的正则化族
    """
    grid = sorted(lambda_grid or DEFAULT_LAMBDA_GRID)
    if len(grid) < 3:
        raise ValueError(f"Λ 网格至少需要 3 个点，实际 {len(grid)}")
    exact = exact_log_slope()
    norm = gaussian_autocorrelation(0.0, sigma)
    expected = complex(exact.evaluate()) * norm
    logger.info(f"精确 log ρ 斜率 {exact.to_text()}, ∫f² = {norm:.6e}")
    fits = {name: _fit_family(name, grid, sigma, tolerance, expected, rhos, workers)
            for name in families}
    return CountertermResult(fits, exact, norm, tolerance)
