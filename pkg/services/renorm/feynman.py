"""
Feynman 参数模块
三角图的参数化约化与参数积分 I

主要功能：
1. feynman_reduce: 单纯形参数化的二次型 ⟨z,Gz⟩ = αx² + βy² + γ(x+y)² 与 det G（sympy）
2. triangle_integral_I: (λ,κ) 形式与单纯形形式的自适应积分（scipy）
3. triangle_coefficient: d=6 三角图的标度破坏 a₂

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import sympy
from scipy import integrate

from services.common.errors import QuadratureError
from services.exact import ExactScalar
from services.kernels import massless_feynman, sphere_volume

logger = logging.getLogger("pqft.renorm.feynman")

ALPHA, BETA, GAMMA = sympy.symbols("alpha beta gamma", positive=True)
LAMBDA_SAMPLES = tuple(round(0.1 * k, 1) for k in range(1, 10))
# 内层积分对每个 λ 都等于 ½，因此 I = ½
TRIANGLE_I = Fraction(1, 2)


@dataclass
class FeynmanReduction:
    """
    参数化结果

    single_coordinate 为真时（两条传播子连接同一对顶点）不需要参数，走单坐标延拓
    """
    topology: str
    dim: int
    powers: Tuple[int, ...]
    parameters: Tuple[sympy.Symbol, ...] = ()
    form: Any = None
    matrix: Any = None
    determinant: Any = sympy.Integer(1)
    integrand: Any = None
    prefactor: Fraction = Fraction(1)
    single_coordinate: bool = False
    notes: List[str] = field(default_factory=list)

    def descriptor(self) -> Dict[str, Any]:
        return {
            "topology": self.topology,
            "dim": self.dim,
            "powers": list(self.powers),
            "determinant": str(self.determinant),
            "integrand": str(self.integrand),
            "prefactor": str(self.prefactor),
            "singleCoordinate": self.single_coordinate,
        }


def feynman_reduce(d: int, powers: Sequence[int], topology: str = "triangle") -> FeynmanReduction:
    """
    1/(b₁^{p₁}b₂^{p₂}b₃^{p₃}) = Γ(Σp)/∏Γ(p_i) ∫_Δ ∏α_i^{p_i−1}/(Σα_i b_i)^{Σp}

    三角图：b₁ = x², b₂ = y², b₃ = (x+y)²；二次型在 ℝ^{2d} 上为 M⊗η，det = det(M)^d

    Raises:
        ValueError: 不支持的拓扑
    """
    powers = tuple(powers)
    if topology == "fish":
        return FeynmanReduction("fish", d, powers, single_coordinate=True,
                                notes=["两条传播子共享相对坐标，直接做单坐标延拓"])
    if topology != "triangle" or len(powers) != 3:
        raise ValueError(f"不支持的拓扑: {topology} {powers}")
    x, y = sympy.symbols("x y", real=True)
    form = ALPHA * x ** 2 + BETA * y ** 2 + GAMMA * (x + y) ** 2
    matrix = sympy.Matrix([[ALPHA + GAMMA, GAMMA], [GAMMA, BETA + GAMMA]])
    determinant = sympy.factor(matrix.det() ** d)
    total = sum(powers)
    weight = ALPHA ** (powers[0] - 1) * BETA ** (powers[1] - 1) * GAMMA ** (powers[2] - 1)
    # ⟨z,Gz⟩^{−Σp} 的标度破坏正比于 |det G|^{−1/2}
    integrand = sympy.simplify(weight / sympy.sqrt(determinant))
    prefactor = Fraction(math.factorial(total - 1), math.prod(math.factorial(p - 1) for p in powers))
    logger.debug(f"三角约化 d={d}: det G = {determinant}, 被积函数 {integrand}")
    return FeynmanReduction("triangle", d, powers, (ALPHA, BETA, GAMMA), form, matrix,
                            determinant, integrand, prefactor)


def _lambda_kappa_integrand(kappa: float, lam: float) -> float:
    return lam * (1 - lam) * (1 - kappa) / (lam * (1 - lam) * kappa + (1 - kappa)) ** 3


def inner_integral(lam: float, tolerance: float = 1e-8) -> float:
    """
    κ 方向的内层积分

    Raises:
        QuadratureError: 误差估计超出容差
    """
    value, error = integrate.quad(_lambda_kappa_integrand, 0.0, 1.0, args=(lam,),
                                  epsabs=tolerance * 1e-2, epsrel=tolerance * 1e-2, limit=200)
    if error > tolerance:
        raise QuadratureError(f"内层积分未收敛: λ={lam}", integrand="triangle_inner",
                              error_estimate=error)
    return value


def triangle_integral_I(tolerance: float = 1e-8) -> float:
    """
    I = ∫₀¹dλ∫₀¹dκ λ(1−λ)(1−κ)/(λ(1−λ)κ + (1−κ))³ = ½

    Raises:
        ValueError: tolerance ≤ 0
        QuadratureError: 积分未收敛
    """
    if tolerance <= 0:
        raise ValueError(f"容差必须为正: {tolerance}")
    value, error = integrate.dblquad(_lambda_kappa_integrand, 0.0, 1.0, 0.0, 1.0,
                                     epsabs=tolerance * 1e-2, epsrel=tolerance * 1e-2)
    if error > tolerance:
        raise QuadratureError("三角参数积分未收敛", integrand="triangle_I", error_estimate=error)
    logger.info(f"✅ 三角参数积分 I = {value:.12f} (误差估计 {error:.1e})")
    return value


def inner_integral_profile(tolerance: float = 1e-8) -> Dict[float, float]:
    """λ ∈ {0.1,…,0.9} 处的内层积分，应与 λ 无关"""
    return {lam: inner_integral(lam, tolerance) for lam in LAMBDA_SAMPLES}


def simplex_integral(reduction: FeynmanReduction, tolerance: float = 1e-6) -> float:
    """
    单纯形形式 ∫_Δ αβγ|det G|^{−1/2}（γ = 1−α−β），与 (λ,κ) 形式应一致

    Raises:
        QuadratureError: 积分未收敛
    """
    fn = sympy.lambdify((ALPHA, BETA, GAMMA), reduction.integrand, "math")
    value, error = integrate.dblquad(lambda b, a: fn(a, b, 1.0 - a - b) if a + b < 1.0 else 0.0,
                                     0.0, 1.0, 0.0, lambda a: 1.0 - a,
                                     epsabs=tolerance * 1e-2, epsrel=tolerance * 1e-2)
    if error > tolerance:
        raise QuadratureError("单纯形积分未收敛", integrand=str(reduction.integrand), error_estimate=error)
    return value


def rationalize(value: float, tolerance: float, max_denominator: int = 64) -> Fraction:
    """
    把数值积分结果识别为小分母有理数

    Raises:
        QuadratureError: 找不到容差内的有理数
    """
    guess = Fraction(value).limit_denominator(max_denominator)
    if abs(float(guess) - value) > tolerance:
        raise QuadratureError(f"积分值不是小分母有理数: {value}", integrand="rationalize",
                              error_estimate=abs(float(guess) - value))
    return guess


def triangle_coefficient(tolerance: float = 1e-8, d: int = 6) -> Tuple[ExactScalar, float]:
    """
    d=6 三角图 (ħH_F)³ 的标度破坏 a₂ = c_F³·5!·|S^{11}|·I

    c_F 为 D_F 的前因子；相位取正（不带 iˢ）

    Returns:
        (ExactScalar, float): 精确的 a₂ 与数值积分 I

    Raises:
        QuadratureError: 数值积分与 I = ½ 不符
    """
    reduction = feynman_reduce(d, (2, 2, 2))
    value = triangle_integral_I(tolerance)
    bound = max(tolerance * 100, 1e-9)
    if abs(value - float(TRIANGLE_I)) > bound:
        raise QuadratureError(f"三角图积分偏离 ½: {value}", integrand="triangle",
                              error_estimate=abs(value - float(TRIANGLE_I)))
    exact_i = rationalize(value, bound)
    propagator = massless_feynman(d).prefactor
    a2 = propagator ** 3 * reduction.prefactor * sphere_volume(2 * d) * exact_i
    logger.info(f"三角图系数 a₂ = {a2.to_text()}")
    return a2, value
