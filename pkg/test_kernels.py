#!/usr/bin/env python3
"""
测试核目录、Bessel 级数、Hadamard 函数与正则化族
"""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.common.errors import HadamardDomainError, KernelDimensionError
from services.exact import ExactScalar
from services.kernels import (
    HadamardEvaluator, KernelExpr, KernelKind, KernelTag, Orientation, SupportRule, bessel_i,
    bessel_k, closed_form_d3, get_available_families, get_family, hadamard_eval, mass_expansion,
    massless_feynman, power_tag, regularized_dot_tag, regularized_limit, regularized_tag,
    retarded_advanced_expansion, smoothness_in_m2_check, sphere_volume, v_coincidence,
)


class TestCatalog:
    """核标签与核表达式"""

    def test_feynman_d4(self):
        kernel = massless_feynman(4)
        assert kernel.prefactor == ExactScalar.term(Fraction(-1, 4), pi_power=-2)
        assert kernel.total_power() == 1
        assert kernel.scaling_degree() == 2

    def test_feynman_d6(self):
        kernel = massless_feynman(6)
        assert kernel.prefactor == ExactScalar.term(Fraction(1, 4), pi_power=-3)
        assert kernel.total_power() == 2

    def test_feynman_odd_dimension(self):
        with pytest.raises(KernelDimensionError):
            massless_feynman(5)

    def test_mixed_dimension_product(self):
        with pytest.raises(KernelDimensionError):
            KernelExpr(ExactScalar.one(), (power_tag(4, 1), power_tag(6, 1)))

    def test_signature_range(self):
        with pytest.raises(KernelDimensionError):
            KernelTag(KernelKind.HADAMARD, dim=4, sig=5)

    def test_product_powers_add(self):
        fish = massless_feynman(4).power(2)
        assert fish.total_power() == 2
        assert fish.scaling_degree() == 4
        assert fish.prefactor == ExactScalar.term(Fraction(1, 16), pi_power=-4)

    def test_support_rules(self):
        assert KernelTag(KernelKind.DELTA_RET).support_rule is SupportRule.FUTURE
        assert KernelTag(KernelKind.DELTA_ADV).support_rule is SupportRule.PAST
        assert KernelTag(KernelKind.HADAMARD).support_rule is SupportRule.NONE

    def test_swapped(self):
        sign, tag = KernelTag(KernelKind.DELTA_COMM).swapped()
        assert sign == -1 and tag.kind is KernelKind.DELTA_COMM
        sign, tag = KernelTag(KernelKind.DELTA_RET).swapped()
        assert sign == 1 and tag.kind is KernelKind.DELTA_ADV
        assert KernelTag(KernelKind.DELTA_RET).orientation is Orientation.RET_ADV

    def test_feynman_in_retarded_basis(self):
        terms = retarded_advanced_expansion(KernelTag(KernelKind.FEYNMAN_H))
        kinds = sorted(tag.kind.value for _, tag in terms)
        assert kinds == ["DeltaAdv", "DeltaRet", "Hadamard"]
        total_i = sum((c for c, tag in terms if tag.kind is not KernelKind.HADAMARD), ExactScalar.zero())
        assert total_i == ExactScalar.i()

    def test_delta_distribution_degree(self):
        tag = KernelTag(KernelKind.DELTA_DISTRIB, dim=4, derivative=(1, 1))
        assert tag.scaling_degree() == 6

    def test_log_power(self):
        assert KernelTag(KernelKind.HADAMARD, dim=4).log_power == 1
        assert KernelTag(KernelKind.HADAMARD, dim=3, sig=2).log_power == 0

    def test_sphere_volume(self):
        assert sphere_volume(4) == ExactScalar.term(2, pi_power=2)
        assert sphere_volume(6) == ExactScalar.term(1, pi_power=3)
        with pytest.raises(ValueError):
            sphere_volume(3)


class TestBessel:
    """修正 Bessel 级数与 mpmath 参照值"""

    @pytest.mark.parametrize("nu", [0, 1, 2, 0.5, 1.5])
    def test_bessel_i(self, nu):
        with mpmath.workdps(30):
            assert abs(bessel_i(nu, 1.3) - mpmath.besseli(nu, 1.3)) < 1e-20

    @pytest.mark.parametrize("nu", [0, 1, 2, 0.5])
    def test_bessel_k(self, nu):
        with mpmath.workdps(30):
            assert abs(bessel_k(nu, 0.7) - mpmath.besselk(nu, 0.7)) < 1e-18


class TestHadamard:
    """Hadamard 函数求值"""

    @given(m2=st.floats(-2.0, 2.0), x2=st.floats(-4.0, -0.05))
    @settings(max_examples=25, deadline=None)
    def test_d3_closed_form(self, m2, x2):
        value = hadamard_eval(3, m2, None, x2)
        expected = closed_form_d3(m2, x2)
        assert value == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_massless_d4(self):
        assert hadamard_eval(4, 0.0, 1.0, -1.0) == pytest.approx(1 / (4 * math.pi ** 2), rel=1e-12)

    def test_timelike_point_rejected(self):
        with pytest.raises(HadamardDomainError):
            hadamard_eval(4, 1.0, 1.0, 0.5)

    def test_even_dimension_needs_mu(self):
        with pytest.raises(HadamardDomainError):
            hadamard_eval(4, 1.0, None, -1.0)

    def test_v_coincidence_d4(self):
        coefficient, numeric = v_coincidence(4, 2.0)
        assert coefficient == ExactScalar.term(Fraction(1, 16), pi_power=-2)
        assert numeric == pytest.approx(2.0 / (16 * math.pi ** 2))

    def test_v_odd_dimension(self):
        with pytest.raises(KernelDimensionError):
            v_coincidence(3, 1.0)

    def test_mu_derivative(self):
        assert HadamardEvaluator().mu_derivative_check(4, 1.0, 1.3, -0.8)

    @pytest.mark.parametrize("d", [3, 4, 6])
    def test_almost_homogeneity(self, d):
        assert HadamardEvaluator().almost_homogeneity_check(d, 0.7, 1.0, -0.6)

    @pytest.mark.parametrize("d", [4, 6])
    def test_smooth_in_mass(self, d):
        assert smoothness_in_m2_check(d, 1.0, -1.0, 2)

    def test_wightman_not_smooth_at_zero_mass(self):
        assert not smoothness_in_m2_check(4, 1.0, -1.0, 1, kernel="wightman")

    def test_massless_limit_d2(self):
        values, limit, finite = HadamardEvaluator().massless_limit(2, 1.0, -1.0)
        assert finite
        assert values[-1] == pytest.approx(limit, abs=1e-6)

    def test_resolve_f0_finite(self):
        numeric, closed = HadamardEvaluator().resolve_f0()
        assert mpmath.isfinite(numeric) and mpmath.isfinite(closed)

    def test_mass_expansion_d4(self):
        terms = mass_expansion(4)
        assert [term.mass_order for term in terms] == [0, 1, 2]
        assert terms[-1].remainder and terms[-1].unique_extension
        assert terms[0].kernels[0] == massless_feynman(4)

    def test_mass_expansion_d6(self):
        terms = mass_expansion(6)
        (kernel,) = terms[1].kernels
        assert kernel.total_power() == 1
        assert kernel.prefactor == ExactScalar.term(Fraction(1, 16), pi_power=-3)


class TestRegularized:
    """正则化族 h_Λ"""

    def test_families(self):
        assert get_available_families() == ["gaussian", "shifted"]
        with pytest.raises(ValueError):
            get_family("lattice")

    @pytest.mark.parametrize("name", ["shifted", "gaussian"])
    def test_scaling(self, name):
        family = get_family(name)
        assert family.scaling_check(3.0, 2.5, 0.4)
        assert family.evaluate(0, 1.0) == 0.0

    @pytest.mark.parametrize("name", ["shifted", "gaussian"])
    def test_large_cutoff_limit(self, name):
        family = get_family(name)
        r = 0.5
        assert family.evaluate(1e4, r) == pytest.approx(1 / (4 * math.pi ** 2 * r * r), rel=1e-6)

    @pytest.mark.parametrize("name", ["shifted", "gaussian"])
    def test_cutoff_derivative(self, name):
        family = get_family(name)
        cutoff, r, h = 2.0, 0.6, 1e-5
        numeric = (family.evaluate(cutoff + h, r) - family.evaluate(cutoff - h, r)) / (2 * h)
        assert family.derivative(cutoff, r) == pytest.approx(numeric, rel=1e-6)

    def test_tags_and_limit(self):
        tag = regularized_tag("gaussian", Fraction(3))
        assert regularized_dot_tag(tag).kind is KernelKind.REGULARIZED_DOT
        limit = regularized_limit(tag)
        assert limit.prefactor == ExactScalar.i()
        assert limit.factors[0].kind is KernelKind.DELTA_DIRAC
        bare = regularized_tag("shifted", Fraction(0), subtract_hadamard=False)
        assert bare.vanishes_identically()
        assert regularized_limit(bare).factors[0].kind is KernelKind.FEYNMAN_H
        with pytest.raises(ValueError):
            regularized_dot_tag(power_tag(4, 1))


if __name__ == "__main__":
    pytest.main([__file__])
