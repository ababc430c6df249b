#!/usr/bin/env python3
"""
测试重整化群：延拓表与 S 矩阵、Z 映射、Gell-Mann–Low 余环、流方程与抵消项提取
"""

import math
from fractions import Fraction

import pytest

from services.common.errors import FitResidualError, MissingExtensionError
from services.exact import Atom, ExactScalar
from services.functionals import (
    DERIV, ONE, PHI, PHI2, PHI3, PHI4, PLAIN, LocalFunctional, SupportRegion, TestFunction,
    cover_grid,
)
from services.products import GraphSum
from services.renorm import DeltaPolynomial, channel_violation, plain_bundle
from services.rgroups import (
    AlphaMap, ExtensionChoice, ExtensionTable, IdentityZMap, PairingSample, SMatrix, atom_degree,
    bhat_function, bhat_relation_check, bundle_omega, bundle_symmetry, causal_factorization,
    cocycle_check, counterterm_extraction, exact_log_slope, fish_interaction, fit_log_slope,
    flow_effective_potential, flow_equation_residual, flow_reference_residual, gamma_v,
    gaussian_autocorrelation, gml_cocycle, hbar_audit, kappa_table, normalize_signature,
    plain_signature, regularized_reference_check, scaling_violation, second_order_difference,
    support_preserved, unitarity_check, z_additivity_check, z_from_smatrices, z_unitarity_condition,
)

F, G = TestFunction("f"), TestFunction("g")
EARLY = TestFunction.bump("a", (0.0, 0.0, 0.0, 0.0))
LATE = TestFunction.bump("b", (10.0, 0.0, 0.0, 0.0))
V = fish_interaction(F)


def _term(q, i_power=0, pi_power=0):
    return ExactScalar.term(q, i_power=i_power, pi_power=pi_power)


def _constant_part(functional, coupling, mass=0):
    """∫f^k 项（单项式为 1）的系数之和"""
    total = ExactScalar.zero()
    for term in functional.terms:
        if term.monomial == ONE and term.coupling == coupling and term.mass == mass:
            total = total + term.coefficient
    return total


class TestSignatures:
    """边束签名"""

    def test_mirror_normalized(self):
        assert normalize_signature([(DERIV, PLAIN)]) == normalize_signature([(PLAIN, DERIV)])

    def test_omega(self):
        assert bundle_omega(4, plain_signature(2)) == 0
        assert bundle_omega(4, plain_signature(3)) == 2
        assert bundle_omega(6, plain_signature(2)) == 2
        assert bundle_omega(4, ((PLAIN, DERIV), (PLAIN, DERIV))) == 2

    def test_symmetry(self):
        assert bundle_symmetry(plain_signature(3)) == 6

    def test_scaling_violation_of_fish(self):
        assert scaling_violation(4, plain_signature(2)) == channel_violation(4, plain_bundle(2))


class TestSMatrix:
    """延拓表与 S 矩阵"""

    def test_missing_extension(self):
        with pytest.raises(MissingExtensionError):
            SMatrix(ExtensionTable(4), 2)(V)

    def test_first_order_is_interaction(self):
        smatrix = SMatrix(ExtensionTable.reference(4), 2)
        assert smatrix.component(V, 1).to_local() == V

    def test_table_descriptor(self):
        table = kappa_table(4)
        descriptor = table.descriptor()
        assert descriptor["name"] == "kappa"
        assert "logRatio" in descriptor

    def test_causal_factorization(self):
        smatrix = SMatrix(ExtensionTable.reference(4), 2)
        later = LocalFunctional.monomial(PHI2, LATE, 1, dim=4, coupling=1)
        earlier = LocalFunctional.monomial(PHI2, EARLY, 1, dim=4, coupling=1)
        assert causal_factorization(smatrix, later, earlier)

    def test_causal_factorization_third_order(self):
        smatrix = SMatrix(ExtensionTable.reference(4), 3)
        later = LocalFunctional.monomial(PHI2, LATE, 1, dim=4, coupling=1)
        earlier = LocalFunctional.monomial(PHI2, EARLY, 1, dim=4, coupling=1)
        assert causal_factorization(smatrix, later, earlier)

    def test_overlapping_divergence_not_supported(self):
        # 三顶点的 2-连通发散子图需要多坐标延拓
        cubic = LocalFunctional.monomial(PHI3, F, 1, dim=4, coupling=1)
        with pytest.raises(MissingExtensionError):
            SMatrix(ExtensionTable.reference(4), 3)(cubic)

    def test_unitarity(self):
        assert unitarity_check(SMatrix(ExtensionTable.reference(4), 2), V)

    def test_unitarity_free_field(self):
        free = LocalFunctional.monomial(PHI, F, ExactScalar.i(), dim=4, hbar=-1, coupling=1)
        assert unitarity_check(SMatrix(ExtensionTable.reference(4), 2), free)

    def test_unitarity_needs_imaginary_offset(self):
        # H_F² 的 δ 偏移必须是纯虚的：共轭把 H_F 换成 H_D，实部不再抵消
        reference = ExtensionTable.reference(4)
        offset = lambda value: ExtensionChoice(DeltaPolynomial.single(value))
        imaginary = reference.with_choice(plain_signature(2), offset(_term(5, i_power=1)))
        real = reference.with_choice(plain_signature(2), offset(5))
        assert unitarity_check(SMatrix(imaginary, 2), V)
        assert not unitarity_check(SMatrix(real, 2), V)


class TestZMaps:
    """Z 映射与 α 映射"""

    def test_identity_at_unit_scale(self):
        z = gml_cocycle(ExtensionTable.reference(4), 2, log_rho=ExactScalar.zero())
        assert (z.apply(V) - V).is_zero()

    def test_input_needs_coupling(self):
        z = gml_cocycle(ExtensionTable.reference(4), 2)
        with pytest.raises(ValueError):
            z.apply(LocalFunctional.monomial(PHI2, F, 1, dim=4))

    def test_cocycle_image(self):
        image = gml_cocycle(ExtensionTable.reference(4), 2).apply(V)
        slope = _constant_part(image, 2).derivative(Atom.LOG_RHO)
        assert slope == _term(Fraction(1, 8), i_power=1, pi_power=-2)
        assert image.filter(lambda t: t.coupling == 1) == V

    def test_exact_log_slope(self):
        assert exact_log_slope() == _term(Fraction(1, 8), i_power=1, pi_power=-2)

    def test_inverse(self):
        z = gml_cocycle(ExtensionTable.reference(4), 2)
        assert (z.apply(z.inverse().apply(V)) - V).is_zero()

    def test_equal_smatrices_give_identity(self):
        smatrix = SMatrix(ExtensionTable.reference(4), 2)
        z = z_from_smatrices(smatrix, smatrix)
        assert (z.apply(V) - V).is_zero()

    def test_identity_map(self):
        assert IdentityZMap(2).apply(V) == V

    def test_properties_recorded(self):
        z = gml_cocycle(ExtensionTable.reference(4), 2)
        record = z.satisfies(V, atom=Atom.LOG_RHO)
        assert False not in record.values()
        assert z.satisfies(V)["C7_almost_scaling"] is None
        assert record["support_preserved"] is None

    def test_support_preserved_on_concrete_support(self):
        early = fish_interaction(EARLY)
        z = gml_cocycle(ExtensionTable.reference(4), 2)
        assert support_preserved(early, z.apply(early)) is True
        assert support_preserved(early, fish_interaction(LATE)) is False
        assert z.satisfies(early)["support_preserved"] is True

    def test_unitarity_condition(self):
        assert z_unitarity_condition(gml_cocycle(ExtensionTable.reference(4), 2), V)

    def test_hbar_audit(self):
        image = gml_cocycle(ExtensionTable.reference(4), 2).apply(V)
        assert hbar_audit(image - V, V)
        assert not hbar_audit(V, V)

    def test_atom_degree(self):
        value = ExactScalar.atom(Atom.LOG_RHO) ** 2 * 3 + 1
        assert atom_degree(value, Atom.LOG_RHO) == 2
        assert atom_degree(value, Atom.LOG_TAU) == 0

    def test_additivity(self):
        cells = cover_grid(SupportRegion.box((0.0,), (3.0,)), 3)
        z = gml_cocycle(ExtensionTable.reference(4), 2)
        assert z_additivity_check(z, fish_interaction, cells)

    def test_alpha_inverse(self):
        functional = LocalFunctional.monomial(PHI4, F, 1, dim=4, coupling=1)
        alpha = AlphaMap(ExactScalar.atom(Atom.LOG_RHO), 4)
        assert alpha.inverse().apply(alpha.apply(functional)) == functional

    def test_alpha_contraction(self):
        functional = LocalFunctional.monomial(PHI2, F, 1, dim=4, coupling=1)
        image = AlphaMap(ExactScalar.rational(4), 4).apply(functional)
        (contracted,) = [t for t in image.terms if t.monomial == ONE]
        assert contracted.coefficient == 2
        assert (contracted.hbar, contracted.mass) == (1, 1)

    def test_alpha_odd_dimension(self):
        with pytest.raises(ValueError):
            AlphaMap(ExactScalar.one(), 3)

    def test_gamma_v(self):
        functional = LocalFunctional.monomial(PHI2, F, 1, dim=4)
        (term,) = gamma_v(functional).terms
        assert term.monomial == ONE and term.mass == 1
        assert term.coefficient == _term(Fraction(1, 32), pi_power=-2)


class TestCocycle:
    """Gell-Mann–Low 余环与 B̂"""

    def test_reference_cocycle(self):
        assert cocycle_check(ExtensionTable.reference(4), V)

    def test_kappa_cocycle(self):
        assert cocycle_check(kappa_table(4), V)

    def test_bhat(self):
        result = bhat_function(ExtensionTable.reference(4), V)
        assert _constant_part(result.value, 2) == _term(Fraction(1, 8), i_power=1, pi_power=-2)
        assert _constant_part(result.value, 1, mass=1) == _term(Fraction(-1, 8), i_power=1, pi_power=-2)
        assert set(result.components) == {1, 2}

    def test_bhat_relation(self):
        assert bhat_relation_check(kappa_table(4), ExtensionTable.reference(4), V)


class TestFlow:
    """Wilson–Polchinski 流方程"""

    @pytest.mark.parametrize("monomial,order", [(PHI4, 1), (PHI4, 2), (PHI3, 3)])
    def test_flow_residual_vanishes(self, monomial, order):
        functional = LocalFunctional.monomial(monomial, F, 1, dim=4, coupling=1)
        assert flow_equation_residual(functional, order).is_zero()

    def test_gaussian_family(self):
        functional = LocalFunctional.monomial(PHI4, F, 1, dim=4, coupling=1)
        assert flow_equation_residual(functional, 2, family="gaussian").is_zero()

    def test_effective_potential_truncated(self):
        functional = LocalFunctional.monomial(PHI4, F, 1, dim=4, coupling=1)
        potential = flow_effective_potential(functional, 2)
        assert not potential.is_zero()
        assert {graph.coupling for graph in potential.graphs()} <= {1, 2}

    @pytest.mark.parametrize("monomial,order", [(PHI3, 3), (PHI4, 2)])
    def test_reference_path_agrees(self, monomial, order):
        functional = LocalFunctional.monomial(monomial, F, 1, dim=4, coupling=1)
        assert flow_reference_residual(functional, order).is_zero()

    def test_regularized_reference(self):
        first = LocalFunctional.monomial(PHI2, F, 1, dim=4, coupling=1)
        second = LocalFunctional.monomial(PHI2, G, 1, dim=4, coupling=1)
        assert regularized_reference_check(first, second)

    def test_second_order_difference(self):
        functional = LocalFunctional.monomial(PHI2, F, 1, dim=4, coupling=1)
        difference = second_order_difference(functional)
        assert isinstance(difference, GraphSum)
        assert not difference.is_zero()
        assert all(graph.coupling == 2 for graph in difference.graphs())


class TestCounterterms:
    """抵消项数值提取的组成部分"""

    def test_autocorrelation_at_origin(self):
        assert gaussian_autocorrelation(0.0, 2.0) == pytest.approx((4 * math.pi) ** 2)

    def test_fit_exact_log(self):
        samples = [PairingSample(c, 3.0 + 0.5 * math.log(c), 0.0) for c in (10.0, 100.0, 1000.0)]
        intercept, slope, residual = fit_log_slope(samples, 1e-9)
        assert intercept == pytest.approx(3.0)
        assert slope == pytest.approx(0.5)
        assert residual < 1e-9

    def test_fit_rejects_non_log(self):
        samples = [PairingSample(c, c ** 0.5, 0.0) for c in (10.0, 100.0, 1000.0, 10000.0)]
        with pytest.raises(FitResidualError):
            fit_log_slope(samples, 1e-3)

    def test_extraction_two_families(self):
        result = counterterm_extraction(tolerance=1e-4)
        assert result.passed
        assert set(result.fits) == {"shifted", "gaussian"}
        assert result.slope_spread <= 1e-4
        expected = complex(exact_log_slope().evaluate()) * gaussian_autocorrelation(0.0, 10.0)
        for fit in result.fits.values():
            assert fit.expected_slope == pytest.approx(expected, rel=1e-12)
            assert fit.amplitude_slope == pytest.approx(expected, rel=1e-4)
            assert fit.recovered[1.0] == 0
        # 有限部分依赖正则化族
        shifted, gaussian = result.finite_parts["shifted"], result.finite_parts["gaussian"]
        assert abs(shifted - gaussian) > 1e-6 * max(abs(shifted), abs(gaussian))

    def test_extraction_input_validation(self):
        with pytest.raises(ValueError):
            counterterm_extraction(lambda_grid=[10.0, 100.0])
        with pytest.raises(ValueError):
            counterterm_extraction(lambda_grid=[10.0, 100.0, 1000.0], families=("lattice",))

    def test_fish_interaction(self):
        (term,) = V.terms
        assert term.monomial == PHI2
        assert term.coefficient == _term(2, i_power=1)
        assert (term.hbar, term.coupling) == (-1, 1)


if __name__ == "__main__":
    pytest.main([__file__])
