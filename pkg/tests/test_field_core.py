"""Tests for jets, points, domains and scalar fields"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.errors import DimensionMismatch, DomainViolation, NonFiniteError
from src.fields.jet import Jet, compose_jet2, exp, log, sqrt
from src.fields.scalar_field import DomainSpec, Point, ScalarField, fd_gradient, fd_hessian


def _variables(values):
    n = len(values)
    return [Jet.variable(v, i, n) for i, v in enumerate(values)]


@pytest.fixture
def positive_quadrant():
    return DomainSpec((0.0, 0.0), (math.inf, math.inf), description="x > 0, y > 0")


@pytest.fixture
def log_field(positive_quadrant):
    """phi(x, y) = x log(x / y), convex but only positive semi-definite"""
    return ScalarField(2, positive_quadrant, lambda a: a[0] * log(a[0] / a[1]), "x log(x/y)")


# -- jet arithmetic --


def test_product_with_exp_matches_closed_form():
    x, y = _variables([1.0, 2.0])
    f = x * y + exp(x)
    e = math.e
    assert f.value == pytest.approx(2.0 + e)
    assert_allclose(f.grad, [2.0 + e, 1.0])
    assert_allclose(f.hess, [[e, 1.0], [1.0, 0.0]])


def test_quotient_and_power():
    x, y = _variables([3.0, 2.0])
    f = x / y + y**3
    assert f.value == pytest.approx(1.5 + 8.0)
    assert_allclose(f.grad, [0.5, -3.0 / 4.0 + 12.0])
    assert_allclose(f.hess, [[0.0, -0.25], [-0.25, 2.0 * 3.0 / 8.0 + 12.0]])


def test_sqrt_and_log_derivatives():
    (x,) = _variables([4.0])
    f = sqrt(x) + log(x)
    assert f.value == pytest.approx(2.0 + math.log(4.0))
    assert f.grad[0] == pytest.approx(0.25 + 0.25)
    assert f.hess[0, 0] == pytest.approx(-1.0 / 32.0 - 1.0 / 16.0)


def test_float_inputs_give_floats():
    assert exp(0.0) == 1.0
    assert sqrt(9.0) == 3.0


def test_compose_matches_direct_evaluation():
    x, y = _variables([0.7, -1.3])
    inner = [x * y, x + y]
    a, b = inner[0].value, inner[1].value
    # outer f(a, b) = a^2 b
    composed = compose_jet2(
        a * a * b, np.array([2 * a * b, a * a]), np.array([[2 * b, 2 * a], [2 * a, 0.0]]), inner
    )
    direct = inner[0] * inner[0] * inner[1]
    assert composed.value == pytest.approx(direct.value)
    assert_allclose(composed.grad, direct.grad, rtol=1e-12)
    assert_allclose(composed.hess, direct.hess, rtol=1e-12, atol=1e-14)


# -- points and domains --


def test_point_defaults_labels():
    p = Point((1.0, 2.0))
    assert p.labels == ("u1", "u2")
    assert p.dimension == 2


def test_point_rejects_non_finite():
    with pytest.raises(NonFiniteError):
        Point((1.0, float("nan")))


def test_point_label_count_must_match():
    with pytest.raises(DimensionMismatch):
        Point((1.0, 2.0), ("v",))


def test_domain_is_open(positive_quadrant):
    assert positive_quadrant.contains([1.0, 1.0])
    assert not positive_quadrant.contains([0.0, 1.0])
    assert not positive_quadrant.contains([1e-12, 1.0])


def test_domain_predicate_is_applied():
    domain = DomainSpec((0.0, 0.0), (10.0, 10.0), lambda x: x[0] < x[1], "x < y")
    assert domain.contains([1.0, 2.0])
    assert not domain.contains([2.0, 1.0])


# -- scalar fields --


def test_jet_at_outside_domain_raises(log_field):
    with pytest.raises(DomainViolation):
        log_field.jet_at([-1.0, 1.0])


def test_jet_at_wrong_length_raises(log_field):
    with pytest.raises(DimensionMismatch):
        log_field.jet_at([1.0, 1.0, 1.0])


def test_active_subset_gives_partial_derivatives(log_field):
    jet = log_field.jet_at([2.0, 1.0], active=(1,))
    assert jet.gradient.shape == (1,)
    assert jet.gradient[0] == pytest.approx(-2.0)
    assert jet.hessian[0, 0] == pytest.approx(2.0)


def test_gradient_matches_central_differences(polytropic):
    field = polytropic.energy_field()
    x = np.array([1.3, 0.004])
    assert_allclose(field.jet_at(x).gradient, fd_gradient(field, x, 1e-6), rtol=1e-6)


def test_hessian_matches_second_differences(polytropic):
    field = polytropic.energy_field()
    x = np.array([0.8, -0.002])
    assert_allclose(field.jet_at(x).hessian, fd_hessian(field, x, 1e-4), rtol=1e-4)


def test_hessian_is_symmetric(log_field):
    H = log_field.jet_at([2.0, 3.0]).hessian
    assert np.array_equal(H, H.T)


def test_non_finite_result_raises(positive_quadrant):
    field = ScalarField(2, positive_quadrant, lambda a: a[0] / (a[1] - a[1]), "division by zero")
    with pytest.raises(NonFiniteError):
        field.value([1.0, 1.0])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
