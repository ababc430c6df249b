"""
Hadamard 函数模块
按修正 Bessel 级数在类空点求值 H^μ_m，并提供其质量展开与光滑性检查

主要功能：
1. 奇数维与偶数维 Hadamard 函数的级数求值
2. v = ½ μ∂_μ H 的数值与符号重合点值
3. H_F 的质量展开（D_F、对数项与常数 F0）
4. m² 光滑性、μ 导数、近齐次性检查与 F0 的数值确定

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath

from services.common.errors import HadamardDomainError, KernelDimensionError
from services.exact import Atom, ExactScalar
from .bessel import bessel_k, sum_series
from .catalog import KernelExpr, log_tag, massless_feynman, power_tag

logger = logging.getLogger("pqft.kernels.hadamard")

WORKING_DPS = 40
RICHARDSON_STEPS = (mpmath.mpf("1e-2"), mpmath.mpf("5e-3"), mpmath.mpf("2.5e-3"))


@dataclass(frozen=True)
class MassExpansionTerm:
    """H_F 质量展开中的一项"""
    mass_order: int
    kernels: Tuple[KernelExpr, ...]
    unique_extension: bool
    remainder: bool = False


def _check_point(d: int, x2) -> mpmath.mpf:
    if d < 2:
        raise HadamardDomainError(f"维数必须 ≥ 2: {d}", parameter="d", value=d)
    x2 = mpmath.mpf(x2)
    if x2 >= 0:
        raise HadamardDomainError(f"仅支持类空点 x² < 0: {x2}", parameter="x2", value=x2)
    return -x2


def _odd_hadamard(d: int, m2: mpmath.mpf, X: mpmath.mpf) -> mpmath.mpf:
    nu = mpmath.mpf(d) / 2 - 1
    z = m2 * X
    prefactor = (2 * mpmath.pi) ** (-mpmath.mpf(d) / 2) * mpmath.pi / (2 * mpmath.sin(nu * mpmath.pi))
    series = sum_series(lambda k: (z / 4) ** k * mpmath.rgamma(k + 1 - nu) / mpmath.factorial(k))
    return prefactor * 2 ** nu * X ** (-nu) * series


def _even_series(n: int, z: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
    s_i = sum_series(lambda k: (z / 4) ** k / (mpmath.factorial(k) * mpmath.factorial(n + k)))
    s_psi = sum_series(lambda k: (mpmath.digamma(k + 1) + mpmath.digamma(n + k + 1))
                       * (z / 4) ** k / (mpmath.factorial(k) * mpmath.factorial(n + k)))
    return s_i, s_psi


def _even_hadamard(d: int, m2: mpmath.mpf, mu: mpmath.mpf, X: mpmath.mpf) -> mpmath.mpf:
    n = d // 2 - 1
    z = m2 * X
    head = mpmath.mpf(0)
    for k in range(n):
        head += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * (-z / 4) ** k
    head = head * 2 ** (n - 1) * X ** (-n) if n else mpmath.mpf(0)
    s_i, s_psi = _even_series(n, z)
    tail = (m2 / 2) ** n * ((-1) ** (n + 1) * mpmath.log(mu * mpmath.sqrt(X) / 2) * s_i
                            + (-1) ** n * s_psi / 2)
    return (2 * mpmath.pi) ** (-mpmath.mpf(d) / 2) * (head + tail)


class HadamardEvaluator:
    """Hadamard 函数求值器"""

    def __init__(self, dps: int = WORKING_DPS):
        self.dps = dps
        self.logger = logging.getLogger("pqft.kernels.hadamard.evaluator")

    # ------------------------------------------------------------------
    # 点求值
    # ------------------------------------------------------------------

    def eval_mp(self, d: int, m2, mu, x2) -> mpmath.mpf:
        """高精度求值，返回 mpmath 数"""
        X = _check_point(d, x2)
        m2 = mpmath.mpf(m2)
        if d % 2:
            return _odd_hadamard(d, m2, X)
        if mu is None or mpmath.mpf(mu) <= 0:
            raise HadamardDomainError(f"偶数维需要正的 μ: {mu}", parameter="mu", value=mu)
        return _even_hadamard(d, m2, mpmath.mpf(mu), X)

    def hadamard_eval(self, d: int, m2: float, mu: Optional[float], x2: float) -> float:
        """
        H^μ_m(x) 在类空点 x² < 0 的值

        Args:
            d: 时空维数
            m2: 质量平方，可为负
            mu: 质量参数（偶数维必需）
            x2: 间隔平方，必须为负

        Returns:
            float: 函数值

        Raises:
            HadamardDomainError: 非类空点或缺少 μ
            SeriesConvergenceError: 级数超出项数预算
        """
        with mpmath.workdps(self.dps):
            return float(self.eval_mp(d, m2, mu, x2))

    def wightman_mp(self, d: int, m2, x2) -> mpmath.mpf:
        """Wightman 两点函数 Δ⁺，仅对 m² > 0 有定义"""
        X = _check_point(d, x2)
        m2 = mpmath.mpf(m2)
        if m2 <= 0:
            raise HadamardDomainError(f"Δ⁺ 仅对 m² > 0 定义: {m2}", parameter="m2", value=m2)
        m = mpmath.sqrt(m2)
        nu = mpmath.mpf(d) / 2 - 1
        y = m * mpmath.sqrt(X)
        return (2 * mpmath.pi) ** (-mpmath.mpf(d) / 2) * (m / mpmath.sqrt(X)) ** nu * bessel_k(nu, y)

    def v_mp(self, d: int, m2, mu, x2) -> mpmath.mpf:
        """v = ½ μ∂_μ H，偶数维由 Bessel 级数的 I 部分给出"""
        X = _check_point(d, x2)
        if d % 2:
            return mpmath.mpf(0)
        n = d // 2 - 1
        m2 = mpmath.mpf(m2)
        s_i, _ = _even_series(n, m2 * X)
        return (2 * mpmath.pi) ** (-mpmath.mpf(d) / 2) * (m2 / 2) ** n * (-1) ** (n + 1) * s_i / 2

    # ------------------------------------------------------------------
    # 符号数据
    # ------------------------------------------------------------------

    @staticmethod
    def v_coefficient(d: int) -> ExactScalar:
        """v(x,x) = c_d · (m²)^{d/2−1} 中的精确系数 c_d"""
        if d % 2:
            raise KernelDimensionError(f"v 仅在偶数维非零: {d}", dims=[d])
        n = d // 2 - 1
        return ExactScalar.term(Fraction((-1) ** (n + 1), 2 ** d * math.factorial(n)),
                                pi_power=-(d // 2))

    def v_coincidence(self, d: int, m2: float, mu: float = 1.0) -> Tuple[ExactScalar, float]:
        """
        v 在重合点的值

        Returns:
            Tuple[ExactScalar, float]: (系数 c_d, 数值 c_d·(m²)^{d/2−1})，d=4 时 c_4 = 1/(16π²)
        """
        coefficient = self.v_coefficient(d)
        n = d // 2 - 1
        numeric = float(coefficient.evaluate().real) * float(m2) ** n
        return coefficient, numeric

    @staticmethod
    def mass_expansion(d: int, order: int = 1) -> List[MassExpansionTerm]:
        """
        H_F 按 m² 的展开

        d=4: [m⁰: D_F, m²: log(−μ²(x²−i0))/(2⁴π²) + F0]；
        d≥6 偶数: [m⁰: D_F, m²: (−1)^n (n−2)!/(16π^{n+1}) (x²−i0)^{1−n}]，
        余项标记为唯一延拓

        Raises:
            KernelDimensionError: 不支持的维数
        """
        if d % 2 or d < 4:
            raise KernelDimensionError(f"质量展开仅支持偶数 d ≥ 4: {d}", dims=[d])
        terms = [MassExpansionTerm(0, (massless_feynman(d),), unique_extension=False)]
        if order >= 1:
            n = d // 2 - 1
            if d == 4:
                log_part = KernelExpr(ExactScalar.term(Fraction(1, 16), pi_power=-2),
                                      (log_tag(4, 0, Atom.LOG_MU),))
                constant = KernelExpr(ExactScalar.atom(Atom.F0), ())
                kernels = (log_part, constant)
            else:
                coefficient = ExactScalar.term(
                    Fraction((-1) ** n * math.factorial(n - 2), 16), pi_power=-(n + 1))
                kernels = (KernelExpr(coefficient, (power_tag(d, n - 1),)),)
            terms.append(MassExpansionTerm(1, kernels, unique_extension=False))
        terms.append(MassExpansionTerm(order + 1, (), unique_extension=True, remainder=True))
        return terms

    # ------------------------------------------------------------------
    # 检查
    # ------------------------------------------------------------------

    def _finite_difference(self, fn: Callable, order: int, step: mpmath.mpf) -> mpmath.mpf:
        total = mpmath.mpf(0)
        for j in range(order + 1):
            offset = (mpmath.mpf(order) / 2 - j) * step
            total += (-1) ** j * mpmath.binomial(order, j) * fn(offset)
        return total / step ** order

    def smoothness_in_m2_check(self, d: int, mu: float, x2: float, order: int,
                               kernel: str = "hadamard", tolerance: float = 1e-6) -> bool:
        """
        m² ↦ H 在 m²=0 两侧的 n 阶中心差分是否 Richardson 稳定

        kernel 取 "wightman" 时检查 Δ⁺，其在 m² ≤ 0 无定义，返回 False
        """
        with mpmath.workdps(self.dps + 20):
            if kernel == "hadamard":
                fn = lambda m2: self.eval_mp(d, m2, mu, x2)
            elif kernel == "wightman":
                fn = lambda m2: self.wightman_mp(d, m2, x2)
            else:
                raise ValueError(f"不支持的核: {kernel}")
            try:
                estimates = [self._finite_difference(fn, order, h) for h in RICHARDSON_STEPS]
            except HadamardDomainError as e:
                self.logger.info(f"❌ m² 光滑性检查不适用: {e.message}")
                return False
            first = (4 * estimates[1] - estimates[0]) / 3
            second = (4 * estimates[2] - estimates[1]) / 3
            scale = max(mpmath.mpf(1), abs(second))
            stable = abs(first - second) <= tolerance * scale
        self.logger.debug(f"d={d} n={order} Richardson 估计 {mpmath.nstr(second, 12)} 稳定={stable}")
        return bool(stable)

    def mu_derivative_check(self, d: int, m2: float, mu: float, x2: float,
                            tolerance: float = 1e-8) -> bool:
        """μ∂_μ H = 2v，用对数 μ 的中心差分检查"""
        with mpmath.workdps(self.dps + 10):
            h = mpmath.mpf("1e-6")
            mu = mpmath.mpf(mu)
            upper = self.eval_mp(d, m2, mu * mpmath.exp(h), x2)
            lower = self.eval_mp(d, m2, mu * mpmath.exp(-h), x2)
            derivative = (upper - lower) / (2 * h)
            expected = 2 * self.v_mp(d, m2, mu, x2)
            return bool(abs(derivative - expected) <= tolerance * max(1, abs(expected)))

    def almost_homogeneity_check(self, d: int, m2: float, mu: float, x2: float,
                                 rhos: Sequence[float] = (0.5, 1.0, 2.0, 4.0),
                                 tolerance: float = 1e-10) -> bool:
        """
        ρ^{d−2} H_{m/ρ}(ρx) 作为 log ρ 的函数至多为一次多项式

        偶数维斜率为 2v(x)，奇数维为常数
        """
        with mpmath.workdps(self.dps):
            logs = [mpmath.log(rho) for rho in rhos]
            values = [mpmath.mpf(rho) ** (d - 2) * self.eval_mp(d, mpmath.mpf(m2) / rho ** 2, mu,
                                                              mpmath.mpf(x2) * rho ** 2)
                      for rho in rhos]
            slopes = [(values[i + 1] - values[i]) / (logs[i + 1] - logs[i]) for i in range(len(rhos) - 1)]
            scale = max(mpmath.mpf(1), *(abs(value) for value in values))
            affine = all(abs(s - slopes[0]) <= tolerance * scale for s in slopes)
            if d % 2 == 0:
                expected = 2 * self.v_mp(d, m2, mu, x2)
                affine = affine and abs(slopes[0] - expected) <= tolerance * scale
            return bool(affine)

    def massless_limit(self, d: int, mu: float, x2: float,
                       exponents: Sequence[int] = (2, 4, 6, 8)) -> Tuple[List[float], float, bool]:
        """
        m² → 0 极限：返回序列、m²=0 的值以及是否收敛

        d=2 时 H 的对数项被 μ 吸收，极限有限
        """
        with mpmath.workdps(self.dps):
            limit = self.eval_mp(d, 0, mu, x2)
            values = [self.eval_mp(d, mpmath.mpf(10) ** (-k), mu, x2) for k in exponents]
            finite = mpmath.isfinite(limit) and abs(values[-1] - limit) <= mpmath.mpf("1e-6") * max(1, abs(limit))
            return [float(v) for v in values], float(limit), bool(finite)

    def resolve_f0(self, mu: float = 1.0, x2: float = -1.0) -> Tuple[float, float]:
        """
        数值确定 d=4 中 H_F 的 m² 常数项

        F0 = ∂H/∂m²|₀ − log(μ²X)/(16π²)，导数用 Richardson 外推的中心差分

        Returns:
            Tuple[float, float]: (数值 F0, 闭式 (2C−1−2log2)/(16π²))
        """
        with mpmath.workdps(self.dps + 20):
            X = -mpmath.mpf(x2)
            fn = lambda m2: self.eval_mp(4, m2, mu, x2)
            estimates = [self._finite_difference(fn, 1, h) for h in RICHARDSON_STEPS]
            derivative = (4 * estimates[2] - estimates[1]) / 3
            numeric = derivative - mpmath.log(mpmath.mpf(mu) ** 2 * X) / (16 * mpmath.pi ** 2)
            closed = (2 * mpmath.euler - 1 - 2 * mpmath.log(2)) / (16 * mpmath.pi ** 2)
        self.logger.info(f"F0 数值 {mpmath.nstr(numeric, 15)}, 闭式 {mpmath.nstr(closed, 15)}")
        return float(numeric), float(closed)


def closed_form_d3(m2: float, x2: float) -> float:
    """d=3 的半整数阶闭式 cosh(m√X)/(4π√X)，m² < 0 时为 cos"""
    with mpmath.workdps(WORKING_DPS):
        X = _check_point(3, x2)
        m2 = mpmath.mpf(m2)
        root = mpmath.sqrt(X)
        if m2 >= 0:
            value = mpmath.cosh(mpmath.sqrt(m2) * root)
        else:
            value = mpmath.cos(mpmath.sqrt(-m2) * root)
        return float(value / (4 * mpmath.pi * root))


_default_evaluator = HadamardEvaluator()


def hadamard_eval(d: int, m2: float, mu: Optional[float], x2: float) -> float:
    return _default_evaluator.hadamard_eval(d, m2, mu, x2)


def smoothness_in_m2_check(d: int, mu: float, x2: float, order: int, kernel: str = "hadamard") -> bool:
    return _default_evaluator.smoothness_in_m2_check(d, mu, x2, order, kernel=kernel)


def v_coincidence(d: int, m2: float, mu: float = 1.0) -> Tuple[ExactScalar, float]:
    return _default_evaluator.v_coincidence(d, m2, mu)


def mass_expansion(d: int, order: int = 1) -> List[MassExpansionTerm]:
    return HadamardEvaluator.mass_expansion(d, order)
