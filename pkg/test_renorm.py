#!/usr/bin/env python3
"""
测试分布延拓、真空通道、三角图参数积分与欧氏标度检验
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.common.errors import ExtensionError, QuadratureError, UnsupportedChannelError
from services.exact import Atom, ExactScalar
from services.functionals import DERIV, PLAIN
from services.kernels import KernelExpr, KernelKind, KernelTag, log_tag, sphere_volume
from services.renorm import feynman
from services.renorm import (
    DeltaPolynomial, PowerLog, box_power_brute_force, box_power_identity, c_k, channel_kernel,
    euclidean_scaling_oracle, explicit_extension, extend, feynman_reduce, get_profile,
    inner_integral_profile, kappa_family_offset, angular_volume, log_violation, power_kernel,
    simplex_integral, standard_channel, triangle_coefficient, triangle_integral_I,
)

def _term(q, i_power=0, pi_power=0, syms=None):
    return ExactScalar.term(q, i_power=i_power, pi_power=pi_power, syms=syms or {})


class TestScalingCoefficients:
    """c_k 闭式与 □^k(x²)^k 恒等式"""

    def test_c0_d4(self):
        assert c_k(4, 3, 0) == _term(-2, i_power=1, pi_power=2)
        assert c_k(4, 0, 0) == _term(2, pi_power=2)

    def test_c1_d6(self):
        assert c_k(6, 5, 1) == _term(Fraction(1, 12), i_power=1, pi_power=3)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            c_k(5, 4, 0)
        with pytest.raises(ValueError):
            c_k(4, 5, 0)
        with pytest.raises(ValueError):
            c_k(4, 3, -1)

    @pytest.mark.parametrize("d,k", [(4, 1), (4, 2), (6, 1), (6, 2), (3, 2)])
    def test_box_identity_brute_force(self, d, k):
        assert box_power_identity(d, k) == box_power_brute_force(d, k)

    @given(d=st.sampled_from([4, 6, 8]), k=st.integers(0, 4))
    @settings(max_examples=30, deadline=None)
    def test_c_k_inverts_box_identity(self, d, k):
        # c_k·□^k(x²)^k 回到 |S^{d−1}|
        assert c_k(d, 0, k) * box_power_identity(d, k) == sphere_volume(d)


class TestExtend:
    """延拓记录"""

    def test_unique_below_threshold(self):
        record = extend(power_kernel(4, 1))
        assert record.omega == -2 and record.unique
        assert record.violation.is_zero()

    def test_log_divergent(self):
        record = extend(power_kernel(4, 2))
        assert record.omega == 0 and not record.unique
        assert record.violation == DeltaPolynomial.single(c_k(4, 3, 0))
        assert record.log_power == 1

    def test_quadratic_divergence_d6(self):
        record = extend(power_kernel(6, 4, Fraction(1, 2)))
        assert record.omega == 2
        assert record.violation.coefficient(1) == _term(Fraction(1, 24), i_power=1, pi_power=3)
        assert record.violation.coefficient(0).is_zero()

    def test_log_kernel(self):
        kernel = KernelExpr(ExactScalar.one(), (log_tag(4, 2, Atom.LOG_KAPPA),))
        record = extend(kernel)
        assert record.log_power == 2
        assert record.violation.coefficient(0) == log_violation(4, 3, Atom.LOG_KAPPA)
        assert log_violation(4, 3, Atom.LOG_KAPPA).derivative(Atom.LOG_TAU) == c_k(4, 3, 0) * -2

    def test_log_kernel_only_at_zero_omega(self):
        with pytest.raises(ExtensionError):
            log_violation(4, 3, Atom.LOG_KAPPA, k=1)

    def test_kernel_outside_catalog(self):
        kernel = KernelExpr(ExactScalar.one(), (KernelTag(KernelKind.HADAMARD, dim=4),))
        with pytest.raises(ExtensionError):
            extend(kernel)

    def test_descriptor(self):
        descriptor = extend(power_kernel(4, 2)).descriptor()
        assert descriptor["omega"] == "0"
        assert descriptor["unique"] is False


class TestExplicitExtension:
    """显式对数延拓"""

    def test_prefactor(self):
        assert explicit_extension(4).prefactor == Fraction(-1, 4)
        assert explicit_extension(6).prefactor == Fraction(-1, 8)

    @pytest.mark.parametrize("d", [4, 6])
    def test_scaling_violation_matches_c0(self, d):
        assert explicit_extension(d).scaling_violation() == c_k(d, d - 1, 0)

    def test_odd_or_small_dimension(self):
        with pytest.raises(ValueError):
            explicit_extension(3)
        with pytest.raises(ValueError):
            explicit_extension(2)

    def test_kappa_family(self):
        offset = kappa_family_offset(power_kernel(4, 2))
        assert offset == DeltaPolynomial.single(c_k(4, 3, 0) * ExactScalar.atom(Atom.LOG_KAPPA))
        with pytest.raises(ExtensionError):
            kappa_family_offset(power_kernel(6, 4))


class TestChannels:
    """真空通道的标度破坏"""

    def test_fish_d4(self):
        assert standard_channel("fish_d4").coefficient(0, 0) == _term(Fraction(-1, 16), i_power=1, pi_power=-2)

    def test_sunset_d4(self):
        violation = standard_channel("sunset_d4")
        assert violation.coefficient(1, 0) == _term(Fraction(1, 1536), i_power=1, pi_power=-4)

    def test_fish_d6(self):
        assert standard_channel("fish_d6").coefficient(1, 0) == _term(Fraction(1, 384), i_power=1, pi_power=-3)
        assert standard_channel("fish_d6_mass").coefficient(0, 1) == _term(Fraction(1, 64), i_power=1,
                                                                            pi_power=-3)

    def test_derivative_d4(self):
        violation = standard_channel("derivative_d4")
        assert violation.coefficient(1, 0) == _term(Fraction(-1, 32), i_power=1, pi_power=-2)

    def test_unknown_channel(self):
        with pytest.raises(ValueError):
            standard_channel("penguin")

    def test_symmetry_factor(self):
        (single,) = channel_kernel(4, [(PLAIN, PLAIN)])
        (double,) = channel_kernel(4, [(PLAIN, PLAIN)] * 2)
        assert double.power == 2
        assert double.coefficient == single.coefficient * single.coefficient * Fraction(1, 2)

    def test_unsupported_derivative_structure(self):
        with pytest.raises(UnsupportedChannelError):
            channel_kernel(4, [(DERIV, DERIV)])
        with pytest.raises(UnsupportedChannelError):
            channel_kernel(4, [(PLAIN, DERIV), (DERIV, PLAIN)])

    def test_two_logs_rejected(self):
        log = PowerLog(ExactScalar.one(), 1, Atom.LOG_MU)
        with pytest.raises(ExtensionError):
            log * log


class TestTriangle:
    """三角图参数积分"""

    def test_integral_is_half(self):
        assert triangle_integral_I() == pytest.approx(0.5, abs=1e-8)

    def test_inner_integral_independent_of_lambda(self):
        values = inner_integral_profile()
        assert len(values) == 9
        for value in values.values():
            assert value == pytest.approx(0.5, abs=1e-8)

    def test_simplex_form_agrees(self):
        reduction = feynman_reduce(6, (2, 2, 2))
        assert reduction.prefactor == 120
        assert simplex_integral(reduction, tolerance=1e-4) == pytest.approx(0.5, abs=1e-3)

    def test_coefficient(self):
        a2, value = triangle_coefficient()
        assert a2 == _term(Fraction(1, 64), pi_power=-3)
        assert value == pytest.approx(0.5, abs=1e-8)

    def test_coefficient_rejects_drifted_integral(self, monkeypatch):
        # 0.25 也是小分母有理数，不能被悄悄接受
        monkeypatch.setattr(feynman, "triangle_integral_I", lambda tolerance: 0.25)
        with pytest.raises(QuadratureError):
            triangle_coefficient()

    def test_fish_needs_no_parameters(self):
        assert feynman_reduce(4, (2,), topology="fish").single_coordinate

    def test_invalid_input(self):
        with pytest.raises(ValueError):
            feynman_reduce(6, (2, 2), topology="box")
        with pytest.raises(ValueError):
            triangle_integral_I(tolerance=0)


class TestEuclideanOracle:
    """欧氏减除延拓的数值标度破坏"""

    def test_angular_volume(self):
        assert angular_volume(4) == pytest.approx(2 * math.pi ** 2, rel=1e-12)
        assert angular_volume(3) == pytest.approx(4 * math.pi, rel=1e-12)

    @pytest.mark.parametrize("d", [2, 4])
    def test_matches_c0(self, d):
        expected = float(c_k(d, 0, 0).evaluate().real)
        assert euclidean_scaling_oracle(d) == pytest.approx(expected, rel=1e-5)

    def test_bump_profile_d3(self):
        assert euclidean_scaling_oracle(3, profile="bump") == pytest.approx(4 * math.pi, rel=1e-5)

    def test_only_log_divergent(self):
        with pytest.raises(ValueError):
            euclidean_scaling_oracle(4, p=1)
        with pytest.raises(ValueError):
            get_profile("lorentzian")


if __name__ == "__main__":
    pytest.main([__file__])
