#!/usr/bin/env python3
"""
测试模型流水线：φ² 示例、六维 φ³、四维 φ⁴ 与模型工厂
"""

from fractions import Fraction

import pytest

from services.common.errors import RegressionMismatchError, UnknownModelError
from services.exact import Atom, ExactScalar
from services.functionals import DPHI2, PHI2, PHI3, PHI4, BasisKey, LagrangianClass, TestFunction
from services.models import (
    BetaReport, CheckResult, Interaction, expected_sunset_mass, get_available_models, get_model,
    leg_counting, phi2_d4_example, phi3_d6_B, phi3_d6_beta, phi3_d6_report, phi4_channels,
    phi4_d4_assembly, phi4_d4_B, phi4_d4_beta, run_model, scale_derivative, tilde,
)
from services.models.phi2_d4 import expected_displays

MASS_KEY = BasisKey(PHI2, 1)


def _term(q, i_power=0, pi_power=0):
    return ExactScalar.term(q, i_power=i_power, pi_power=pi_power)


class TestFactory:
    """模型工厂"""

    def test_available(self):
        assert get_available_models() == ["phi2_d4_example", "phi3_d6", "phi4_d4"]

    def test_unknown_model(self):
        with pytest.raises(UnknownModelError):
            get_model("phi6_d3")

    def test_name_normalized(self):
        assert get_model("  PHI3_D6 ") is phi3_d6_report


class TestBetaParts:
    """β 组装的各部分"""

    def test_tilde(self):
        display = LagrangianClass.from_entries([(BasisKey(PHI4), 1, 2, 2), (BasisKey(PHI4), 1, 1, 1)])
        result = tilde(display)
        assert result.coefficient("phi4", 1, 2) == ExactScalar.i()
        assert result.coefficient("phi4", 1, 1) == 1

    def test_leg_counting(self):
        legs = leg_counting([Interaction(PHI4), Interaction(DPHI2, 3)], 4)
        assert legs.coefficient("phi4", 0, 1) == 4
        assert legs.coefficient("dphi2", 0, 1) == 6

    def test_scale_derivative(self):
        entries = [Interaction(PHI4), Interaction(PHI2, 1, mass=1)]
        result = scale_derivative(entries, 4)
        assert result.keys() == [MASS_KEY]
        assert result.coefficient(MASS_KEY, 0, 1) == 2


class TestPhi4:
    """四维 φ⁴"""

    def test_channels(self):
        channels = phi4_channels()
        assert channels["fish"] == _term(Fraction(-1, 16), 1, -2)
        assert channels["b1"] == _term(Fraction(-1, 8), 1, -2)
        assert channels["sunset_box"] == _term(Fraction(1, 1536), 1, -4)
        assert channels["sunset_mass"] == expected_sunset_mass()

    def test_display(self):
        display, _ = phi4_d4_B()
        assert display.coefficient(PHI4, 2, 2) == _term(Fraction(-3, 16), 1, -2)
        assert display.coefficient(DPHI2, 3, 2) == _term(Fraction(-1, 1536), 1, -4)

    def test_beta(self):
        beta = phi4_d4_beta()
        assert beta.coefficient(PHI4, 1, 2) == _term(Fraction(3, 16), 0, -2)
        assert beta.coefficient(MASS_KEY, 1, 1) == _term(Fraction(-1, 16), 0, -2)
        assert sorted(key.name for key in beta.keys()) == ["m2*phi2", "phi4"]

    def test_beta_free_of_scheme_constants(self):
        beta = phi4_d4_beta()
        for key in beta.keys():
            for _, value in beta.component(key).items():
                assert not value.free_atoms() & {Atom.F0, Atom.LOG_TAU}

    def test_tau_shift(self):
        display, _ = phi4_d4_B()
        slope = display.coefficient(MASS_KEY, 3, 2).derivative(Atom.LOG_TAU)
        assert slope == _term(Fraction(1, 128), 1, -4)

    def test_higher_order(self):
        assembly = phi4_d4_assembly()
        assert assembly.higher_order.coefficient(PHI4, 2, 3) == _term(Fraction(1, 768), 0, -4)

    def test_insertions(self):
        with_a, _ = phi4_d4_B(a=1)
        assert with_a.coefficient(MASS_KEY, 2, 2) == _term(Fraction(-1, 16), 1, -2)
        with_b, _ = phi4_d4_B(b=1)
        assert with_b.coefficient(MASS_KEY, 2, 2) == _term(Fraction(-1, 8), 1, -2)

    def test_report(self):
        report = run_model("phi4_d4")
        assert isinstance(report, BetaReport)
        assert report.passed, [c.to_dict() for c in report.failed_checks()]
        data = report.to_dict()
        assert data["model"] == "phi4_d4"
        assert any(row["basis"] == "Gamma_H(phi4)" for row in data["higher_order"])
        assert {"section", "basis", "hbar", "coupling", "symbolic", "real", "imag"} == set(report.csv_rows()[0])


class TestPhi3:
    """六维 φ³"""

    def test_channels(self):
        _, channels = phi3_d6_B(3)
        assert channels["a0"] == _term(Fraction(1, 384), 1, -3)
        assert channels["a1"] == _term(Fraction(1, 64), 1, -3)
        assert channels["a2"] == _term(Fraction(1, 64), 0, -3)

    def test_second_order_has_no_triangle(self):
        _, channels = phi3_d6_B(2)
        assert "a2" not in channels

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            phi3_d6_B(4)

    def test_beta(self):
        beta = phi3_d6_beta()
        assert beta.coefficient(PHI3, 1, 3) == _term(Fraction(-3, 256), 0, -3)
        assert beta.coefficient(PHI3, 1, 3).to_text() == "-3/256 * pi^-3"
        assert [key.name for key in beta.keys()] == ["phi3"]

    def test_report(self):
        report = phi3_d6_report()
        assert report.passed, [c.to_dict() for c in report.failed_checks()]
        assert report.gamma_dot.coefficient(1, 2) == _term(Fraction(1, 384), 0, -3)


class TestPhi2Example:
    """φ² 模型的显式结果"""

    def test_example(self):
        report = phi2_d4_example()
        assert report.passed, [c.to_dict() for c in report.failed_checks()]
        assert set(report.displays) == {"z_rho", "alpha", "bhat"}
        assert False not in report.extras["properties"].values()

    def test_expected_displays_share_interaction(self):
        displays = expected_displays(TestFunction("f"))
        difference = displays["z_rho"] - displays["alpha"]
        assert all(term.monomial.is_constant() for term in difference.terms)


class TestChecks:
    """回归检查记录"""

    def test_compare(self):
        assert CheckResult.compare("x", ExactScalar.i(), ExactScalar.i()).passed
        assert not CheckResult.compare("x", ExactScalar.i(), ExactScalar.one()).passed

    def test_within(self):
        assert CheckResult.within("y", 1.0, 1.0 + 1e-9, 1e-6).passed

    def test_raise_for_status(self):
        with pytest.raises(RegressionMismatchError):
            CheckResult.flag("z", False, "不一致").raise_for_status()


if __name__ == "__main__":
    pytest.main([__file__])
