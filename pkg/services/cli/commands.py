"""
命令实现模块
beta / extend / check / flow / hadamard 五个子命令

主要功能：
1. cmd_beta: 运行模型流水线并附带回归检查
2. cmd_extend: 纯幂核的延拓记录、c_k 闭式比较与欧氏数值检验
3. cmd_check: 乘积、流方程、余环、Hadamard 与三角参数积分的检查套件
4. cmd_flow: φ² 模型的抵消项数值提取
5. cmd_hadamard: Hadamard 函数的点求值

每个命令返回 CommandResult，退出码 0 当且仅当全部检查通过

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from typing import Callable, Dict, List, Optional

from core.config import RunConfig
from services.common.errors import FitResidualError
from services.exact import to_decimal
from services.functionals import PHI, PHI2, PHI3, PHI4, LocalFunctional, TestFunction
from services.kernels import (
    HadamardEvaluator, closed_form_d3, get_available_families, hadamard_eval, smoothness_in_m2_check,
)
from services.models import CheckResult, get_model
from services.products import (
    associativity_check, causal_factorization_check, commutator_check, conjugation_check,
    dyson_schwinger_check, star, timeordered,
)
from services.products.graph import GraphSum
from services.renorm import (
    c_k, euclidean_scaling_oracle, extend, inner_integral_profile, power_kernel,
    sphere_volume_float, triangle_integral_I,
)
from services.rgroups import (
    ExtensionTable, bhat_relation_check, cocycle_check, counterterm_extraction, fish_interaction,
    flow_equation_residual, kappa_table,
)
from .output import CommandResult

logger = logging.getLogger("pqft.cli.commands")

CHECK_SUITES = ("products", "flow", "cocycle", "hadamard", "feynmanI")


def _checks_payload(checks: List[CheckResult], **extra) -> Dict:
    return {"checks": [check.to_dict() for check in checks],
            "passed": all(check.passed for check in checks), **extra}


def _exit_code(checks: List[CheckResult]) -> int:
    return 0 if all(check.passed for check in checks) else 1


def _check_lines(title: str, checks: List[CheckResult]) -> str:
    lines = [title] + [f"  {'✅' if c.passed else '❌'} {c.name}: {c.detail}" for c in checks]
    return "\n".join(lines)


# ----------------------------------------------------------------------
# beta
# ----------------------------------------------------------------------

def cmd_beta(model: str, config: RunConfig) -> CommandResult:
    """
    运行模型

    Raises:
        UnknownModelError: 模型未注册（CLI 映射为退出码 2）
    """
    runner = get_model(model)
    kwargs = {"phi3_d6": {"tolerance": config.tolerance},
              "phi4_d4": {"tolerance": config.oracle_tolerance}}.get(model.strip().lower(), {})
    report = runner(**kwargs)
    for check in report.failed_checks():
        logger.error(f"❌ 回归不一致 {check.name}: {check.detail}")
    return CommandResult(model, report.to_dict(), report.csv_rows(), 0 if report.passed else 1,
                         report.summary())


# ----------------------------------------------------------------------
# extend
# ----------------------------------------------------------------------

def cmd_extend(dim: int, sig: Optional[int], power: int, oracle: bool, config: RunConfig) -> CommandResult:
    """
    prefactor 为 1 的 (x²−iε)^{−power} 的延拓

    ω = 2k ≥ 0 时与 c_k 闭式比较；oracle 要求 ω = 0，与 |S^{d−1}| 比较
    """
    sig = dim - 1 if sig is None else sig
    kernel = power_kernel(dim, power, 1, sig)
    record = extend(kernel)
    checks: List[CheckResult] = []
    omega = record.omega
    if not record.unique and dim % 2 == 0 and omega.denominator == 1 and int(omega) % 2 == 0:
        k = int(omega) // 2
        checks.append(CheckResult.compare(f"c_{k}", c_k(dim, sig, k), record.violation.coefficient(k, 0)))
    if oracle:
        if 2 * power != dim:
            raise ValueError(f"欧氏检验需要 ω = 0: 2·{power} ≠ {dim}")
        numeric = euclidean_scaling_oracle(dim, power, tolerance=config.oracle_tolerance)
        checks.append(CheckResult.within("euclidean_oracle", sphere_volume_float(dim), numeric,
                                         config.oracle_tolerance))
    payload = {
        "kernel": kernel.descriptor(),
        "record": record.descriptor(),
        "violation": {str(box): {"symbolic": value.to_text(), "decimal": to_decimal(value, config.decimal_digits)}
                      for (box, _), value in record.violation.items()},
        **_checks_payload(checks),
    }
    rows = [{"section": "violation", "basis": f"box^{box}", "symbolic": value.to_text(),
             "real": to_decimal(value).get("re", ""), "imag": to_decimal(value).get("im", "")}
            for (box, _), value in record.violation.items()]
    summary = _check_lines(f"延拓 d={dim} s={sig} (x²−iε)^-{power}: ω={omega}, 破坏 {record.violation.to_text()}",
                           checks)
    return CommandResult(f"d{dim}_s{sig}_p{power}", payload, rows, _exit_code(checks), summary)


# ----------------------------------------------------------------------
# check
# ----------------------------------------------------------------------

def _local(monomial, f: TestFunction, dim: int = 4, coupling: int = 1) -> GraphSum:
    return GraphSum.from_local(LocalFunctional.monomial(monomial, f, 1, dim=dim, coupling=coupling))


def suite_products(config: RunConfig, order: int = 2) -> List[CheckResult]:
    """⋆ 与 ·_T 的结合律、共轭、对易关系、因果分解与 Dyson–Schwinger 方程"""
    hbar_max = config.h_max
    early = TestFunction.bump("f", (0.0, 0.0, 0.0, 0.0))
    late = TestFunction.bump("g", (10.0, 0.0, 0.0, 0.0))
    third = TestFunction.bump("h", (20.0, 0.0, 0.0, 0.0))
    a, b, c = _local(PHI, early), _local(PHI2, late), _local(PHI, third)
    star_limited = lambda x, y: star(x, y, hbar_max=hbar_max)
    time_limited = lambda x, y: timeordered(x, y, hbar_max=hbar_max)
    return [
        CheckResult.flag("star_associativity", associativity_check(a, b, c, star_limited, "⋆ ")),
        CheckResult.flag("timeordered_associativity", associativity_check(a, b, c, time_limited, "·_T ")),
        CheckResult.flag("conjugation", conjugation_check(a, b)),
        CheckResult.flag("commutator", commutator_check(early, late)),
        CheckResult.flag("causal_factorization", causal_factorization_check(
            _local(PHI2, late), _local(PHI2, early), hbar_max=hbar_max)),
        CheckResult.flag("dyson_schwinger", dyson_schwinger_check(_local(PHI3, early), late, hbar_max=hbar_max)),
    ]


def suite_flow(config: RunConfig, order: int = 3) -> List[CheckResult]:
    """流方程残差：φ³ 与 φ⁴ 顶点，阶 1..order"""
    f = TestFunction("f")
    checks = []
    for monomial in (PHI3, PHI4):
        functional = LocalFunctional.monomial(monomial, f, 1, dim=4, coupling=1)
        for n in range(1, order + 1):
            residual = flow_equation_residual(functional, n)
            checks.append(CheckResult.flag(f"flow_{monomial.name}_order{n}", residual.is_zero(),
                                           f"剩余 {len(residual)} 个图"))
    return checks


def suite_cocycle(config: RunConfig, order: int = 2) -> List[CheckResult]:
    """φ² 模型的余环恒等式与 κ 族的 B̂ 变换关系"""
    V = fish_interaction(TestFunction("f"))
    reference = ExtensionTable.reference(4)
    return [
        CheckResult.flag("gml_cocycle", cocycle_check(reference, V, order)),
        CheckResult.flag("bhat_relation", bhat_relation_check(kappa_table(4), reference, V)),
    ]


def suite_hadamard(config: RunConfig, order: int = 2, dims: Optional[List[int]] = None) -> List[CheckResult]:
    """
    d=3 半整数阶闭式、d=2 的 m²→0 极限、偶数维 m² 光滑性与 Δ⁺ 对照
    """
    dims = dims or [2, 3, 4, 6]
    evaluator = HadamardEvaluator()
    checks: List[CheckResult] = []
    if 3 in dims:
        for m2 in (0.5, -0.5, 2.0):
            checks.append(CheckResult.within(f"d3_closed_form_m2={m2}", closed_form_d3(m2, -1.0),
                                             hadamard_eval(3, m2, None, -1.0), 1e-10))
    if 2 in dims:
        values, limit, finite = evaluator.massless_limit(2, 1.0, -1.0)
        checks.append(CheckResult.flag("d2_massless_limit", finite, f"H(m²→0) = {limit:.12g}"))
    for d in (d for d in dims if d % 2 == 0 and d >= 4):
        checks.append(CheckResult.flag(f"d{d}_smooth_in_m2", smoothness_in_m2_check(d, 1.0, -1.0, order)))
        wightman = smoothness_in_m2_check(d, 1.0, -1.0, order, kernel="wightman")
        checks.append(CheckResult.flag(f"d{d}_wightman_not_smooth", not wightman, "Δ⁺ 在 m² ≤ 0 无定义"))
    if 4 in dims:
        numeric, closed = evaluator.resolve_f0()
        checks.append(CheckResult.flag("F0_resolved", math.isfinite(numeric),
                                       f"数值 {numeric:.12g}, 闭式 (2C−1−2log2)/(16π²) = {closed:.12g}"))
    return checks


def suite_feynman(config: RunConfig, order: int = 0) -> List[CheckResult]:
    """三角参数积分 I = 1/2 与内层积分的 λ 无关性"""
    tolerance = config.tolerance
    value = triangle_integral_I(tolerance)
    profile = inner_integral_profile(tolerance)
    spread = max(profile.values()) - min(profile.values())
    return [
        CheckResult.within("triangle_I", 0.5, value, tolerance),
        CheckResult.flag("inner_lambda_independent", spread <= tolerance, f"最大差 {spread:.2e}"),
    ]


_SUITES: Dict[str, Callable[..., List[CheckResult]]] = {
    "products": suite_products,
    "flow": suite_flow,
    "cocycle": suite_cocycle,
    "hadamard": suite_hadamard,
    "feynmanI": suite_feynman,
}


def cmd_check(suite: str, config: RunConfig, order: Optional[int] = None,
              dims: Optional[List[int]] = None) -> CommandResult:
    """
    Raises:
        ValueError: 不支持的检查套件
    """
    if suite not in _SUITES:
        raise ValueError(f"不支持的检查套件: {suite}，可用: {list(CHECK_SUITES)}")
    kwargs = {} if order is None else {"order": order}
    if suite == "hadamard" and dims:
        kwargs["dims"] = dims
    checks = _SUITES[suite](config, **kwargs)
    return CommandResult(suite, _checks_payload(checks, suite=suite), [], _exit_code(checks),
                         _check_lines(f"检查套件 {suite}", checks))


# ----------------------------------------------------------------------
# flow
# ----------------------------------------------------------------------

def cmd_flow(config: RunConfig) -> CommandResult:
    """φ² 模型的 Wilson 抵消项提取；拟合残差超限时退出码 1"""
    unknown = [name for name in config.families if name not in get_available_families()]
    if unknown:
        raise ValueError(f"不支持的正则化族: {unknown}")
    try:
        result = counterterm_extraction(config.lambda_grid, config.families, config.sigma,
                                        config.fit_tolerance, workers=config.workers)
    except FitResidualError as e:
        logger.error(f"❌ {e.message}")
        return CommandResult("counterterms", {"error": e.to_dict(), "passed": False}, [], 1, e.message)
    payload = result.descriptor()
    rows = []
    for name, fit in result.fits.items():
        for sample in fit.samples:
            rows.append({"section": name, "basis": f"lambda={sample.cutoff:g}", "real": sample.value})
        rows.append({"section": name, "basis": "log_slope", "real": fit.amplitude_slope.real,
                     "imag": fit.amplitude_slope.imag})
    lines = [f"精确 log ρ 斜率 {result.exact_slope.to_text()} × ∫f² = {result.norm:.6e}"]
    for name, fit in result.fits.items():
        lines.append(f"  {'✅' if fit.relative_error <= result.tolerance else '❌'} {name}: "
                     f"相对误差 {fit.relative_error:.2e}, 恢复误差 {result.recovery_error(fit):.2e}")
    lines.append(f"  族间斜率差 {result.slope_spread:.2e}")
    return CommandResult("counterterms", payload, rows, 0 if result.passed else 1, "\n".join(lines))


# ----------------------------------------------------------------------
# hadamard
# ----------------------------------------------------------------------

def cmd_hadamard(dim: int, m2: float, mu: Optional[float], x2: float, config: RunConfig) -> CommandResult:
    """
    H^μ_m(x) 的点求值；d=3 附带 Bessel 半整数阶闭式对照，偶数维附带 v 的重合点系数

    Raises:
        HadamardDomainError: 非类空点或偶数维缺少 μ
    """
    value = hadamard_eval(dim, m2, mu, x2)
    payload: Dict = {"dim": dim, "m2": m2, "mu": mu, "x2": x2, "value": value}
    checks: List[CheckResult] = []
    if dim == 3:
        checks.append(CheckResult.within("bessel_closed_form", closed_form_d3(m2, x2), value, 1e-10))
    if dim % 2 == 0:
        exact, numeric = HadamardEvaluator().v_coincidence(dim, m2, 1.0 if mu is None else mu)
        payload["v_coincidence"] = {"symbolic": exact.to_text(), "value": numeric}
    payload.update(_checks_payload(checks))
    name = f"d{dim}_m2={m2:g}_x2={x2:g}"
    summary = _check_lines(f"H(d={dim}, m²={m2}, μ={mu}, x²={x2}) = {value:.15g}", checks)
    return CommandResult(name, payload, [], _exit_code(checks), summary)


__all__ = [
    'CHECK_SUITES', 'cmd_beta', 'cmd_check', 'cmd_extend', 'cmd_flow', 'cmd_hadamard',
    'suite_cocycle', 'suite_feynman', 'suite_flow', 'suite_hadamard', 'suite_products',
]
