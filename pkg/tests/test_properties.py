"""Property-based tests with hypothesis"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.convexity.definiteness import DefinitenessClass, classify_hessian
from src.eos.eos_factory import EOSFactory
from src.euler.densities import energy_density_field, relative_energy
from src.fields.jet import Jet
from src.fields.scalar_field import DomainSpec, ScalarField
from src.transforms.legendre import legendre, legendre_pairing_residual

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=0.1, max_value=10.0, allow_nan=False, allow_infinity=False)
# rounded so that no subnormal coordinates are drawn
coordinate = finite.map(lambda x: round(x, 6))

UNIT_GAS = EOSFactory.create_eos("polytropic", {"R": 1.0, "gamma": 1.4}, {"v": 1.0, "s": 0.0, "u": 2.5})


def _diagonal_quadratic(weights):
    def expression(a):
        total = a[0] * a[0] * (0.5 * weights[0])
        for w, x in zip(weights[1:], a[1:]):
            total = total + x * x * (0.5 * w)
        return total

    return ScalarField(len(weights), DomainSpec.unbounded(len(weights)), expression, "diagonal quadratic")


@given(st.lists(st.floats(min_value=-5.0, max_value=5.0).filter(lambda x: abs(x) > 1e-3), min_size=1, max_size=5))
def test_negation_mirrors_diagonal_class(diagonal):
    H = np.diag(diagonal)
    assert classify_hessian(-H).cls == classify_hessian(H).cls.mirrored()


@given(finite, finite, finite, finite)
def test_product_rule(a, b, c, d):
    x, y = Jet.variable(a, 0, 2), Jet.variable(b, 1, 2)
    f, g = x * c + y, x * y + d
    product = f * g
    assert_allclose(product.grad, f.value * g.grad + g.value * f.grad, rtol=1e-12, atol=1e-9)
    expected_hess = f.value * g.hess + g.value * f.hess + np.outer(f.grad, g.grad) + np.outer(g.grad, f.grad)
    assert_allclose(product.hess, expected_hess, rtol=1e-12, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.lists(positive, min_size=1, max_size=3), st.data())
def test_legendre_pairing_for_diagonal_quadratic(weights, data):
    field = _diagonal_quadratic(weights)
    dual = legendre(field, seed=[0.0] * len(weights))
    u = np.array(data.draw(st.lists(coordinate, min_size=len(weights), max_size=len(weights))))
    assert legendre_pairing_residual(field, dual, u) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.2, max_value=5.0), st.floats(min_value=-2.0, max_value=2.0))
def test_polytropic_energy_is_positive_definite(v, s):
    verdict = classify_hessian(UNIT_GAS.energy_field().jet_at([v, s]).hessian)
    assert verdict.cls == DefinitenessClass.POSITIVE_DEFINITE


@settings(max_examples=30, deadline=None)
@given(
    st.tuples(positive, finite, st.floats(min_value=-2.0, max_value=2.0)),
    st.tuples(positive, finite, st.floats(min_value=-2.0, max_value=2.0)),
)
def test_relative_energy_is_nonnegative(first, second):
    field = energy_density_field(UNIT_GAS, 1)
    u1 = np.array([first[0], first[1], first[0] * first[2]])
    u2 = np.array([second[0], second[1], second[0] * second[2]])
    value = relative_energy(UNIT_GAS, 1, u1, u2, field)
    assert value >= -1e-12 * (abs(field.value(u1)) + abs(field.value(u2)) + 1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
