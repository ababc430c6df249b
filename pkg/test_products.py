#!/usr/bin/env python3
"""
测试收缩乘积：⋆、·_T、参照路径、正则化乘积与因果分解
"""

from fractions import Fraction

import pytest

from services.common.errors import NonLocalResidueError, SupportPreconditionError
from services.exact import ExactScalar
from services.functionals import PHI, PHI2, PHI3, PHI4, LocalFunctional, TestFunction
from services.kernels import KernelKind
from services.products import (
    GraphSum, associativity_check, causal_factorization_check, commutator_check, conjugation_check,
    dM_dLambda, differentiate_cutoff, dyson_schwinger_check, exp_product, log_product, named_product,
    pointwise, power, product_options, reference_product, regularized_product, star, timeordered,
)

F, G, H = TestFunction("f"), TestFunction("g"), TestFunction("h")
EARLY = TestFunction.bump("a", (0.0, 0.0, 0.0, 0.0))
LATE = TestFunction.bump("b", (10.0, 0.0, 0.0, 0.0))


def _local(monomial, test_function, coupling=0):
    return GraphSum.from_local(LocalFunctional.monomial(monomial, test_function, 1, dim=4, coupling=coupling))


class TestStar:
    """⋆ 乘积"""

    def test_field_product(self):
        product = star(_local(PHI, F), _local(PHI, G))
        assert len(product) == 2
        (contracted,) = [graph for graph in product.graphs() if graph.edge_count == 1]
        assert product.coefficient(contracted) == ExactScalar.i() * Fraction(1, 2)
        assert contracted.edges[0].tag.kind is KernelKind.DELTA_COMM

    def test_commutator(self):
        assert commutator_check(F, G)

    def test_associativity(self):
        assert associativity_check(_local(PHI, F), _local(PHI2, G), _local(PHI, H), star)

    def test_conjugation(self):
        assert conjugation_check(_local(PHI2, F), _local(PHI, G))

    def test_hbar_truncation(self):
        full = star(_local(PHI2, F), _local(PHI2, G))
        limited = star(_local(PHI2, F), _local(PHI2, G), hbar_max=1)
        assert limited == full.truncate(hbar_max=1)
        assert max(graph.hbar for graph in full.graphs()) == 2


class TestTimeOrdered:
    """·_T 乘积"""

    def test_commutative(self):
        a, b = _local(PHI3, F), _local(PHI2, G)
        assert timeordered(a, b) == timeordered(b, a)

    def test_associativity(self):
        assert associativity_check(_local(PHI, F), _local(PHI2, G), _local(PHI, H), timeordered)

    def test_reference_path(self):
        a, b = _local(PHI2, F), _local(PHI2, G)
        assert reference_product(a, b, "time_ordered") == timeordered(a, b)

    def test_reference_path_needs_single_option(self):
        with pytest.raises(ValueError):
            reference_product(_local(PHI, F), _local(PHI, G), "star_h")

    def test_exp_log(self):
        V = _local(PHI2, F, coupling=1)
        product = lambda x, y: timeordered(x, y, coupling_max=3)
        E = exp_product(V, product, 3)
        assert E.unit_coefficient() == 1
        assert log_product(E, product, 3) == V

    def test_log_needs_unit(self):
        with pytest.raises(ValueError):
            log_product(_local(PHI, F), timeordered, 2)

    def test_power(self):
        V = _local(PHI, F)
        assert power(V, 0, timeordered).unit_coefficient() == 1
        assert power(V, 2, pointwise) == pointwise(V, V)

    def test_causal_factorization(self):
        assert causal_factorization_check(_local(PHI2, LATE), _local(PHI2, EARLY))

    def test_causal_factorization_precondition(self):
        with pytest.raises(SupportPreconditionError):
            causal_factorization_check(_local(PHI2, EARLY), _local(PHI2, LATE))
        with pytest.raises(SupportPreconditionError):
            causal_factorization_check(_local(PHI2, F), _local(PHI2, G))

    def test_dyson_schwinger(self):
        assert dyson_schwinger_check(_local(PHI3, EARLY), LATE)
        assert dyson_schwinger_check(_local(PHI4, F), G, hbar_max=2)


class TestNamedProducts:
    """乘积工厂与正则化乘积"""

    def test_unknown_product(self):
        with pytest.raises(ValueError):
            named_product("wick")
        with pytest.raises(ValueError):
            product_options("wick")

    def test_named_matches_direct(self):
        a, b = _local(PHI2, F), _local(PHI, G)
        assert named_product("star")(a, b) == star(a, b)

    def test_zero_cutoff_is_pointwise(self):
        a, b = _local(PHI2, F), _local(PHI2, G)
        assert regularized_product(a, b, cutoff=Fraction(0)) == pointwise(a, b)

    def test_cutoff_derivative_single_dot(self):
        a, b = _local(PHI2, F), _local(PHI2, G)
        derivative = dM_dLambda(a, b)
        assert not derivative.is_zero()
        for graph in derivative.graphs():
            kinds = [edge.tag.kind for edge in graph.edges]
            assert kinds.count(KernelKind.REGULARIZED_DOT) == 1

    def test_leibniz_rule(self):
        a, b = _local(PHI2, F), _local(PHI2, G)
        total = differentiate_cutoff(regularized_product(a, b))
        assert total == dM_dLambda(a, b)

    def test_to_local(self):
        a = _local(PHI4, F)
        assert a.to_local() == LocalFunctional.monomial(PHI4, F, 1, dim=4)
        with pytest.raises(NonLocalResidueError):
            star(_local(PHI, F), _local(PHI, G)).to_local()


if __name__ == "__main__":
    pytest.main([__file__])
