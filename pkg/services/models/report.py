"""
模型报告模块
β 函数计算结果的统一载体与序列化

主要功能：
1. CheckResult: 回归检查的名称、状态与详情
2. BetaReport: 模型 id、B 分量、γ̇/λ̇、β、检查列表、高阶附加项与来源说明
3. ExampleReport: φ² 模型的 Z(ρ)、α、B̂ 三个局域泛函
4. JSON 字典与 CSV 行的导出（精确符号 + 30 位十进制）

作者: Assistant
创建时间: 2024年
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from services.common.errors import RegressionMismatchError
from services.exact import ExactScalar, FormalSeries, to_decimal
from services.functionals import LagrangianClass, LocalFunctional

logger = logging.getLogger("pqft.models.report")


def scalar_entry(value: ExactScalar, digits: int = 30) -> Dict[str, Any]:
    """精确值的符号与十进制表示"""
    return {"symbolic": value.to_text(), "decimal": to_decimal(value, digits)}


def series_rows(series: FormalSeries) -> List[Dict[str, Any]]:
    return [{"hbar": h, "coupling": g, **scalar_entry(value)} for (h, g), value in series.items()]


def class_rows(lagrangian: LagrangianClass) -> List[Dict[str, Any]]:
    """LagrangianClass → [{basis, hbar, coupling, symbolic, decimal}]"""
    rows = []
    for key in lagrangian.keys():
        for row in series_rows(lagrangian.component(key)):
            rows.append({"basis": key.name, **row})
    return rows


def functional_rows(functional: LocalFunctional) -> List[Dict[str, Any]]:
    """LocalFunctional → [{basis, smearing, hbar, coupling, mass, symbolic, decimal}]"""
    return [{
        "basis": term.monomial.name,
        "smearing": list(term.smearing.slots),
        "hbar": term.hbar,
        "coupling": term.coupling,
        "mass": term.mass,
        **scalar_entry(term.coefficient),
    } for term in functional.terms]


def _csv_row(section: str, row: Dict[str, Any]) -> Dict[str, Any]:
    decimal = row.get("decimal", {})
    return {
        "section": section,
        "basis": row.get("basis", ""),
        "hbar": row.get("hbar", ""),
        "coupling": row.get("coupling", ""),
        "symbolic": row.get("symbolic", ""),
        "real": decimal.get("re", ""),
        "imag": decimal.get("im", ""),
    }


@dataclass
class CheckResult:
    """单项回归检查"""
    name: str
    passed: bool
    detail: str = ""

    @classmethod
    def compare(cls, name: str, expected: ExactScalar, actual: ExactScalar) -> "CheckResult":
        """精确比较两个标量"""
        expected, actual = ExactScalar.coerce(expected), ExactScalar.coerce(actual)
        passed = (expected - actual).is_zero()
        return cls(name, passed, f"期望 {expected.to_text()}, 实际 {actual.to_text()}")

    @classmethod
    def within(cls, name: str, expected: float, actual: float, tolerance: float) -> "CheckResult":
        """数值比较，相对容差"""
        error = abs(expected - actual) / max(1.0, abs(expected))
        return cls(name, error <= tolerance, f"期望 {expected:.12g}, 实际 {actual:.12g}, 误差 {error:.2e}")

    @classmethod
    def same(cls, name: str, expected: LocalFunctional, actual: LocalFunctional) -> "CheckResult":
        """局域泛函的精确相等"""
        residual = actual - expected
        return cls(name, residual.is_zero(), f"期望 {expected.to_text()}, 残差 {residual.to_text()}")

    @classmethod
    def flag(cls, name: str, passed: bool, detail: str = "") -> "CheckResult":
        return cls(name, bool(passed), detail)

    def raise_for_status(self) -> None:
        if not self.passed:
            raise RegressionMismatchError(self.name, self.detail, "failed")

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail}


class CheckLog:
    """报告共用的检查记录；宿主提供 model 与 checks 字段"""

    model: str
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add_check(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        marker = "✅" if check.passed else "❌"
        logger.info(f"{marker} [{self.model}] {check.name}: {check.detail}")
        return check

    def failed_checks(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def check_lines(self) -> List[str]:
        return [f"  {'✅' if check.passed else '❌'} {check.name}" for check in self.checks]


@dataclass
class BetaReport(CheckLog):
    """
    一次模型计算的报告

    components 为 (ħ/i)·[B∘ℒ]（交互中的 i/ħ 已提出），beta 为 (ħ/i)·β(ℒ)
    """
    model: str
    order: int
    components: LagrangianClass
    gamma_dot: FormalSeries
    lambda_dot: FormalSeries
    beta: LagrangianClass
    checks: List[CheckResult] = field(default_factory=list)
    higher_order: List[Dict[str, Any]] = field(default_factory=list)
    channels: Dict[str, ExactScalar] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)
    extras: Dict[str, Any] = field(default_factory=dict)

    def beta_coefficient(self, basis: str, h: int, g: int) -> ExactScalar:
        return self.beta.coefficient(basis, h, g)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "order": self.order,
            "components": class_rows(self.components),
            "gammaDot": series_rows(self.gamma_dot),
            "lambdaDot": series_rows(self.lambda_dot),
            "beta": class_rows(self.beta),
            "channels": {name: scalar_entry(value) for name, value in sorted(self.channels.items())},
            "checks": [check.to_dict() for check in self.checks],
            "higher_order": self.higher_order,
            "notes": dict(self.notes),
            **self.extras,
        }

    def csv_rows(self) -> List[Dict[str, Any]]:
        """系数表：section, basis, hbar, coupling, symbolic, real, imag"""
        rows: List[Dict[str, Any]] = []
        for section, lagrangian in (("components", self.components), ("beta", self.beta)):
            rows.extend(_csv_row(section, row) for row in class_rows(lagrangian))
        rows.extend(_csv_row("higher_order", row) for row in self.higher_order)
        for name, value in sorted(self.channels.items()):
            rows.append(_csv_row("channels", {"basis": name, **scalar_entry(value)}))
        return rows

    def summary(self, width: Optional[int] = None) -> str:
        """人类可读的表格"""
        lines = [f"模型 {self.model} (阶 {self.order})", "β:"]
        for row in class_rows(self.beta):
            lines.append(f"  [{row['basis']}] ħ^{row['hbar']} g^{row['coupling']}: {row['symbolic']}")
        lines.append("检查:")
        lines.extend(self.check_lines())
        return "\n".join(line[:width] if width else line for line in lines)


@dataclass
class ExampleReport(CheckLog):
    """φ² 模型的三个显式结果：Z(ρ)(V)、α_{−v log ρ²}(V)、B̂(V)"""
    model: str
    order: int
    interaction: LocalFunctional
    displays: Dict[str, LocalFunctional]
    checks: List[CheckResult] = field(default_factory=list)
    notes: Dict[str, str] = field(default_factory=dict)
    extras: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "order": self.order,
            "interaction": functional_rows(self.interaction),
            "displays": {name: functional_rows(value) for name, value in self.displays.items()},
            "checks": [check.to_dict() for check in self.checks],
            "notes": dict(self.notes),
            **self.extras,
        }

    def csv_rows(self) -> List[Dict[str, Any]]:
        rows: List[Dict[str, Any]] = []
        for name, value in self.displays.items():
            rows.extend(_csv_row(name, row) for row in functional_rows(value))
        return rows

    def summary(self, width: Optional[int] = None) -> str:
        lines = [f"模型 {self.model} (阶 {self.order})", f"V = {self.interaction.to_text()}"]
        for name, value in self.displays.items():
            lines.append(f"  {name} = {value.to_text()}")
        lines.append("检查:")
        lines.extend(self.check_lines())
        return "\n".join(line[:width] if width else line for line in lines)
