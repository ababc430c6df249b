#!/usr/bin/env python3
"""
测试精确算术：ExactScalar 的环运算与 FormalSeries 的截断运算
"""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.common.errors import ConstantTermError, TruncationMismatchError
from services.exact import Atom, ExactScalar, FormalSeries, scalar_sum, to_decimal

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
atoms = st.sampled_from([Atom.LOG_RHO, Atom.LOG_MU, Atom.LOG_TAU, Atom.F0])


@st.composite
def scalars(draw, max_terms=3):
    """随机精确标量：若干 q·i^a·π^b·原子^k 之和"""
    total = ExactScalar.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        syms = draw(st.dictionaries(atoms, st.integers(1, 2), max_size=2))
        total = total + ExactScalar.term(draw(fractions), i_power=draw(st.integers(0, 3)),
                                         pi_power=draw(st.integers(-3, 3)), syms=syms)
    return total


@st.composite
def series(draw, truncation=(2, 2), allow_constant=False):
    coeffs = {}
    for h in range(truncation[0] + 1):
        for g in range(truncation[1] + 1):
            if (h, g) == (0, 0) and not allow_constant:
                continue
            if draw(st.booleans()):
                coeffs[(h, g)] = draw(scalars(max_terms=2))
    return FormalSeries(coeffs, truncation)


class TestExactScalar:
    """精确标量"""

    def test_i_squared(self):
        i = ExactScalar.i()
        assert i * i == -1
        assert i ** 4 == 1
        assert (i ** 3).is_imaginary()

    def test_odd_powers_of_i_cancel(self):
        i_cubed = ExactScalar.term(1, i_power=3, pi_power=-2)
        assert (i_cubed + ExactScalar.term(1, i_power=1, pi_power=-2)).is_zero()
        assert ExactScalar.term(3, i_power=2) == -3
        assert ExactScalar.term(3, i_power=2).to_text() == "-3"
        assert i_cubed.coefficient(i_power=3, pi_power=-2) == 1
        assert i_cubed.coefficient(i_power=1, pi_power=-2) == -1

    @given(a=scalars(), b=scalars())
    @settings(max_examples=50, deadline=None)
    def test_equal_values_share_form(self, a, b):
        # 相等的值有相同的规范形与散列
        left, right = a * b, b * a
        assert left == right and hash(left) == hash(right)
        assert (a - a).is_zero()

    def test_pi_inverse(self):
        value = ExactScalar.term(Fraction(3, 16), i_power=1, pi_power=-2)
        assert value * value.inverse() == 1
        assert value / value == ExactScalar.one()

    def test_inverse_requires_single_term(self):
        with pytest.raises(ZeroDivisionError):
            (ExactScalar.one() + ExactScalar.i()).inverse()

    def test_zero_terms_removed(self):
        value = ExactScalar.pi() - ExactScalar.pi()
        assert value.is_zero()
        assert not value
        assert value.to_text() == "0"

    def test_conj(self):
        value = ExactScalar.term(2, i_power=1, pi_power=1) + 3
        assert value.conj() == ExactScalar.term(-2, i_power=1, pi_power=1) + 3

    def test_derivative_and_substitute(self):
        log_tau = ExactScalar.atom(Atom.LOG_TAU)
        value = ExactScalar.term(Fraction(1, 4), i_power=1) * log_tau ** 2
        assert value.derivative(Atom.LOG_TAU) == ExactScalar.term(Fraction(1, 2), i_power=1) * log_tau
        assert value.substitute(Atom.LOG_TAU, ExactScalar.rational(2)) == ExactScalar.i()
        assert value.derivative(Atom.LOG_MU).is_zero()

    def test_drop_atom(self):
        value = ExactScalar.one() + ExactScalar.atom(Atom.F0)
        assert value.drop_atom(Atom.F0) == 1
        assert value.free_atoms() == {Atom.F0}

    def test_evaluate(self):
        value = ExactScalar.term(1, i_power=1, pi_power=-2)
        number = value.evaluate()
        with mpmath.workdps(40):
            assert abs(number - mpmath.mpc(0, 1) / mpmath.pi ** 2) < 1e-25

    def test_evaluate_unbound_atom(self):
        with pytest.raises(KeyError):
            ExactScalar.atom(Atom.LOG_MU).evaluate()
        assert to_decimal(ExactScalar.atom(Atom.LOG_MU)) == {"symbolic": True}

    def test_euler_constant_default(self):
        number = ExactScalar.atom(Atom.EULER_C).evaluate()
        with mpmath.workdps(40):
            assert abs(number.real - mpmath.euler) < 1e-25

    def test_to_decimal(self):
        rendered = to_decimal(ExactScalar.term(Fraction(1, 2), i_power=1), digits=10)
        assert float(rendered["im"]) == pytest.approx(0.5)
        assert float(rendered["re"]) == 0.0

    def test_parse_text(self):
        value = ExactScalar.term(Fraction(-3, 256), pi_power=-3) + ExactScalar.term(
            1, i_power=1, syms={Atom.LOG_TAU: 1})
        assert ExactScalar.parse(value.to_text()) == value

    def test_scalar_sum(self):
        assert scalar_sum([ExactScalar.pi(), ExactScalar.pi(), -ExactScalar.pi()]) == ExactScalar.pi()

    def test_coerce_rejects_float(self):
        with pytest.raises(TypeError):
            ExactScalar.coerce(0.5)

    @given(scalars(), scalars(), scalars())
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0

    @given(scalars(), scalars())
    @settings(max_examples=60, deadline=None)
    def test_conj_is_ring_involution(self, a, b):
        assert a.conj().conj() == a
        assert (a * b).conj() == a.conj() * b.conj()

    @given(scalars(), scalars(), atoms)
    @settings(max_examples=60, deadline=None)
    def test_leibniz(self, a, b, atom):
        assert (a * b).derivative(atom) == a.derivative(atom) * b + a * b.derivative(atom)

    @given(scalars())
    @settings(max_examples=40, deadline=None)
    def test_hash_consistent(self, a):
        assert hash(a + 0) == hash(a)


class TestFormalSeries:
    """双分次截断级数"""

    def test_truncation_drops_terms(self):
        s = FormalSeries({(0, 1): ExactScalar.one(), (3, 0): ExactScalar.one()}, (2, 2))
        assert s.bidegrees() == [(0, 1)]

    def test_negative_bidegree(self):
        with pytest.raises(ValueError):
            FormalSeries({(-1, 0): ExactScalar.one()})

    def test_mismatched_truncation(self):
        with pytest.raises(TruncationMismatchError):
            FormalSeries.constant(truncation=(2, 2)) + FormalSeries.constant(truncation=(3, 3))

    def test_cauchy_product(self):
        g = FormalSeries.monomial(ExactScalar.one(), g=1, truncation=(1, 2))
        square = g * g
        assert square.coefficient(0, 2) == 1
        assert (square * g).is_zero()

    def test_exp_requires_zero_constant(self):
        with pytest.raises(ConstantTermError):
            FormalSeries.constant().exp()

    def test_log_requires_unit_constant(self):
        with pytest.raises(ConstantTermError):
            FormalSeries.monomial(ExactScalar.one(), g=1).log()

    def test_exp_of_coupling(self):
        g = FormalSeries.monomial(ExactScalar.one(), g=1, truncation=(0, 3))
        e = g.exp()
        assert e.coefficient(0, 0) == 1
        assert e.coefficient(0, 2) == Fraction(1, 2)
        assert e.coefficient(0, 3) == Fraction(1, 6)

    def test_shift_hbar(self):
        s = FormalSeries.monomial(ExactScalar.i(), h=1, g=1)
        assert s.shift_hbar(-1).coefficient(0, 1) == ExactScalar.i()
        with pytest.raises(ValueError):
            s.shift_hbar(-2)

    def test_injected_product(self):
        left = FormalSeries.monomial(ExactScalar.rational(2), g=1)
        right = FormalSeries.monomial(ExactScalar.rational(3), h=1)
        result = left.mul(right, product=lambda x, y: x + y)
        assert result.coefficient(1, 1) == 5

    @given(series())
    @settings(max_examples=30, deadline=None)
    def test_log_inverts_exp(self, s):
        assert s.exp().log() == s

    @given(series(), series())
    @settings(max_examples=30, deadline=None)
    def test_exp_additive_for_commuting_coefficients(self, s, t):
        assert (s + t).exp() == s.exp() * t.exp()


if __name__ == "__main__":
    pytest.main([__file__])
