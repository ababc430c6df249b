#!/usr/bin/env python3
"""
测试局域泛函：单项式代数、支集、标度作用、泛函导数、可加性与拉格朗日量类
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.common.errors import SupportPreconditionError, UnsupportedChannelError
from services.exact import ExactScalar
from services.functionals import (
    DERIV, DPHI2, ONE, PHI, PHI2, PHI3, PHI4, PLAIN, BasisKey, FieldConfiguration, FieldMonomial,
    GeneralizedLagrangian, Grid, LagrangianClass, LocalFunctional, NonlocalSquare, Smearing,
    SupportRegion, TestFunction, box_delta_class, check_additivity, check_splitting, clique_signs,
    cover_grid, delta_class, functional_derivative, require_later, scale_lagrangian,
)

positive = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=16)

GRID = Grid((-3.0, -3.0), (3.0, 3.0), points=41)


def _smeared(monomial, coefficient=1, dim=4):
    f = TestFunction.bump("f", (0.0, 0.0), radius=3.5)
    return LocalFunctional.monomial(monomial, f, coefficient=coefficient, dim=dim)


class TestMonomial:
    """归一化单项式"""

    def test_products(self):
        assert PHI.product(PHI) == (Fraction(2), PHI2)
        assert PHI2.product(PHI2) == (Fraction(6), PHI4)
        assert delta_class(PHI, PHI3) == (Fraction(4), PHI4)

    def test_product_outside_basis(self):
        with pytest.raises(ValueError):
            DPHI2.product(DPHI2)

    def test_engineering_dimension(self):
        assert PHI4.engineering_dimension(4) == 4
        assert DPHI2.engineering_dimension(4) == 4
        assert PHI3.engineering_dimension(6) == 6

    def test_remove_leg(self):
        assert PHI2.remove_leg(PLAIN) == PHI
        assert PHI2.remove_leg(DERIV) is None
        assert DPHI2.remove_leg(DERIV) == FieldMonomial(0, 1)

    def test_names(self):
        for monomial in (ONE, PHI, PHI2, DPHI2, PHI3, PHI4, FieldMonomial(1, 1)):
            assert FieldMonomial.parse(monomial.name) == monomial
        assert BasisKey.parse("m2*phi2") == BasisKey(PHI2, 1)
        assert BasisKey(PHI2, 1).name == "m2*phi2"

    def test_invalid(self):
        with pytest.raises(ValueError):
            FieldMonomial(0, 3)
        with pytest.raises(ValueError):
            FieldMonomial.parse("psi")


class TestSupport:
    """支集与因果关系"""

    def test_later(self):
        early = SupportRegion.ball((0.0, 0.0), 1.0)
        late = SupportRegion.ball((10.0, 0.0), 1.0)
        assert late.later_than(early)
        assert not early.later_than(late)
        require_later(late, early)
        with pytest.raises(SupportPreconditionError):
            require_later(early, late)

    def test_spacelike(self):
        left = SupportRegion.ball((0.0, -10.0), 1.0)
        right = SupportRegion.ball((0.0, 10.0), 1.0)
        assert left.spacelike_to(right)

    def test_empty_region_has_no_box(self):
        with pytest.raises(SupportPreconditionError):
            SupportRegion.empty().bounding_box()

    def test_cover_signs(self):
        cells = cover_grid(SupportRegion.box((0.0,), (3.0,)), 3)
        signs = clique_signs(cells)
        # 一维链: 相邻对 +1，中间单元 −1，端点单元抵消
        assert sorted(signs.values()) == [-1, 1, 1]
        with pytest.raises(ValueError):
            cover_grid(SupportRegion.box((0.0,), (1.0,)), 2, overlap=0.5)

    def test_functional_support(self):
        functional = LocalFunctional.monomial(PHI4, TestFunction.bump("g", (1.0, 1.0), radius=0.5))
        assert functional.support().subset_of(SupportRegion.ball((1.0, 1.0), 0.5))
        assert LocalFunctional.monomial(PHI4).support().is_empty()


class TestLocalFunctional:
    """局域泛函的线性结构与标度"""

    def test_cancellation(self):
        functional = _smeared(PHI4, ExactScalar.i())
        assert (functional - functional).is_zero()

    def test_coefficient_lookup(self):
        functional = _smeared(PHI2, 3)
        assert functional.coefficient(PHI2, Smearing(("f",))) == 3
        assert functional.coefficient(PHI4, Smearing(("f",))).is_zero()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            _smeared(PHI2, dim=4) + _smeared(PHI2, dim=6)

    def test_sigma_rho_weights(self):
        functional = _smeared(PHI2) + _smeared(PHI4)
        scaled = functional.sigma_rho(Fraction(2))
        smearing = Smearing(("f",), Fraction(2))
        assert scaled.coefficient(PHI2, smearing) == 4
        assert scaled.coefficient(PHI4, smearing) == 1

    def test_sigma_rho_positive(self):
        with pytest.raises(ValueError):
            _smeared(PHI2).sigma_rho(0)

    @given(positive, positive)
    @settings(max_examples=40, deadline=None)
    def test_sigma_rho_composes(self, rho, tau):
        functional = _smeared(PHI2) + _smeared(DPHI2, 2) + _smeared(PHI3, dim=4)
        assert functional.sigma_rho(rho).sigma_rho(tau) == functional.sigma_rho(rho * tau)

    @given(positive, positive)
    @settings(max_examples=40, deadline=None)
    def test_sigma_rho_composes_odd_dimension(self, rho, tau):
        functional = _smeared(PHI, dim=3) + _smeared(PHI2, dim=3)
        assert functional.sigma_rho(rho).sigma_rho(tau) == functional.sigma_rho(rho * tau)

    def test_evaluate_quadratic(self):
        functional = _smeared(PHI2, 2)
        phi = FieldConfiguration.single((0.0, 0.0), radius=1.0)
        value = functional.evaluate(phi, GRID)
        doubled = functional.evaluate(phi.on(GRID) * 2, GRID)
        assert value.real > 0
        assert doubled == pytest.approx(4 * value)


class TestFunctionalDerivative:
    """泛函导数只支撑在对角线上"""

    def test_phi4_second_derivative(self):
        kernel = functional_derivative(_smeared(PHI4), 2)
        assert kernel.is_delta_chain()
        assert [(t.legs, t.remaining) for t in kernel.terms] == [((PLAIN, PLAIN), PHI2)]

    def test_beyond_degree(self):
        assert functional_derivative(_smeared(PHI4), 5).is_zero()
        with pytest.raises(ValueError):
            functional_derivative(_smeared(PHI4), 0)

    def test_center_relative_gradient(self):
        kernel = functional_derivative(_smeared(DPHI2), 2)
        terms = kernel.center_relative()
        pairs = {(t.center_derivatives, t.relative_derivatives): t.coefficient for t in terms}
        assert pairs == {(2, 0): Fraction(1, 4), (0, 2): -1}

    def test_center_relative_order(self):
        with pytest.raises(ValueError):
            functional_derivative(_smeared(PHI4), 3).center_relative()


class TestAdditivity:
    """可加性与支集分解"""

    phi = FieldConfiguration.single((-1.5, 0.0), radius=1.0)
    chi = FieldConfiguration.single((0.0, 0.0), radius=1.2, height=0.7)
    psi = FieldConfiguration.single((1.5, 0.0), radius=1.0, height=1.3)

    @pytest.mark.parametrize("monomial", [PHI2, PHI4, DPHI2])
    def test_local_is_additive(self, monomial):
        assert check_additivity(_smeared(monomial), self.phi, self.chi, self.psi, GRID)

    def test_square_is_not_additive(self):
        square = NonlocalSquare(_smeared(PHI))
        assert not check_additivity(square, self.phi, self.chi, self.psi, GRID)

    def test_overlapping_supports_rejected(self):
        with pytest.raises(SupportPreconditionError):
            check_additivity(_smeared(PHI2), self.phi, self.chi, self.phi, GRID)

    def test_nonlocal_square_needs_linear(self):
        with pytest.raises(ValueError):
            NonlocalSquare(_smeared(PHI2))

    @pytest.mark.parametrize("monomial", [PHI2, PHI4])
    def test_splitting(self, monomial):
        phi = FieldConfiguration.single((0.0, 0.0), radius=1.5)
        assert check_splitting(_smeared(monomial), phi, GRID)


class TestLagrangian:
    """拉格朗日量类与广义拉格朗日量"""

    def test_constants_dropped(self):
        cls = LagrangianClass.from_entries([(BasisKey(ONE), 1, 0, 1), (BasisKey(PHI4), 1, 0, 1)])
        assert cls.keys() == [BasisKey(PHI4)]

    def test_linear_dropped_on_request(self):
        entries = [(BasisKey(PHI), 1, 0, 1), (BasisKey(PHI3), 1, 0, 1)]
        assert BasisKey(PHI) in LagrangianClass.from_entries(entries).keys()
        assert LagrangianClass.from_entries(entries, dim=6, ignore_linear=True).keys() == [BasisKey(PHI3)]

    def test_entries_accumulate(self):
        cls = LagrangianClass.from_entries([(BasisKey(PHI4), 1, 1, 2), (BasisKey(PHI4), 2, 1, 2)])
        assert cls.coefficient("phi4", 1, 2) == 3
        assert (cls - cls).is_zero()

    def test_shift(self):
        cls = LagrangianClass.from_entries([(BasisKey(PHI4), ExactScalar.i(), 1, 2)])
        assert cls.shift(hbar=-1).coefficient("phi4", 0, 2) == ExactScalar.i()

    def test_box_delta(self):
        assert box_delta_class(PHI, PHI) == [(Fraction(-2), DPHI2)]
        assert box_delta_class(ONE, PHI2) == []
        with pytest.raises(UnsupportedChannelError):
            box_delta_class(PHI2, PHI)

    def test_from_local(self):
        cls = LagrangianClass.from_local(_smeared(PHI4, ExactScalar.i()).shift(hbar=1, coupling=2))
        assert cls.coefficient("phi4", 1, 2) == ExactScalar.i()

    def test_generalized_scaling(self):
        lagrangian = GeneralizedLagrangian.from_terms([("phi2", 1, 0, 1), ("phi4", 1, 0, 1)])
        f = TestFunction("f")
        scaled = scale_lagrangian(lagrangian, 2)(f)
        assert scaled.coefficient(PHI2, Smearing(("f",)), coupling=1) == 4
        assert scaled.coefficient(PHI4, Smearing(("f",)), coupling=1) == 1
        assert lagrangian.scale(2).scale(3) == lagrangian.scale(6)
        with pytest.raises(ValueError):
            lagrangian.scale(-1)

    def test_support_property(self):
        lagrangian = GeneralizedLagrangian.from_terms([("phi4", 1, 0, 1), ("dphi2", 1, 0, 0)])
        f = TestFunction.bump("f", (0.0, 0.0), radius=1.0)
        g = TestFunction.bump("g", (5.0, 0.0), radius=1.0)
        assert lagrangian.support_property(f, g)

    def test_lagrangian_class(self):
        lagrangian = GeneralizedLagrangian.from_terms([("phi4", 1, 0, 1), ("1", 5, 0, 0)])
        assert lagrangian.lagrangian_class().keys() == [BasisKey(PHI4)]


if __name__ == "__main__":
    pytest.main([__file__])
