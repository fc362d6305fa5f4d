"""Tests for Hessian classification, convexity inequalities and region sweeps"""

import math

import numpy as np
import pytest

from src.convexity.convexity_tests import (
    gradient_monotonicity_test,
    segment_convexity_test,
    supporting_hyperplane_test,
)
from src.convexity.definiteness import DefinitenessClass, classify_hessian, matches_expectation
from src.convexity.region import GridSampler, RandomSampler, region_sweep, violation_interval
from src.core.errors import AsymmetryTooLarge, DomainViolation, NonFiniteError, SamplerExhausted
from src.fields.scalar_field import DomainSpec, ScalarField


@pytest.fixture
def quartic():
    """phi(x) = x^4: strictly convex with a singular Hessian at the origin"""
    return ScalarField(1, DomainSpec.unbounded(1), lambda a: a[0] * a[0] * a[0] * a[0], "x^4")


@pytest.fixture
def saddle():
    return ScalarField(2, DomainSpec.unbounded(2), lambda a: a[0] * a[0] - a[1] * a[1], "x^2 - y^2")


# -- classification --


@pytest.mark.parametrize(
    "matrix, expected",
    [
        ([[2.0, 0.0], [0.0, 1.0]], DefinitenessClass.POSITIVE_DEFINITE),
        ([[1.0, 0.0], [0.0, 0.0]], DefinitenessClass.POSITIVE_SEMI_DEFINITE),
        ([[-1.0, 0.0], [0.0, -3.0]], DefinitenessClass.NEGATIVE_DEFINITE),
        ([[0.0, 0.0], [0.0, -1.0]], DefinitenessClass.NEGATIVE_SEMI_DEFINITE),
        ([[1.0, 0.0], [0.0, -1.0]], DefinitenessClass.INDEFINITE),
        ([[1.0, 2.0], [2.0, 1.0]], DefinitenessClass.INDEFINITE),
        ([[0.0, 0.0], [0.0, 0.0]], DefinitenessClass.POSITIVE_SEMI_DEFINITE),
    ],
)
def test_classification(matrix, expected):
    assert classify_hessian(np.array(matrix)).cls == expected


def test_margin_is_relative_to_frobenius_norm():
    verdict = classify_hessian(np.diag([1.0, 2.0]))
    assert verdict.margin == pytest.approx(1.0 / math.sqrt(5.0))
    assert verdict.min_eig == pytest.approx(1.0)
    assert verdict.max_eig == pytest.approx(2.0)
    assert verdict.minors_agree is True


def test_tiny_eigenvalue_falls_in_zero_band():
    verdict = classify_hessian(np.diag([1.0, 1e-12]))
    assert verdict.cls == DefinitenessClass.POSITIVE_SEMI_DEFINITE
    assert verdict.zero_count == 1
    assert verdict.near_degenerate


def test_mirrored_classes():
    assert DefinitenessClass.POSITIVE_DEFINITE.mirrored() == DefinitenessClass.NEGATIVE_DEFINITE
    assert DefinitenessClass.NEGATIVE_SEMI_DEFINITE.mirrored() == DefinitenessClass.POSITIVE_SEMI_DEFINITE
    assert DefinitenessClass.INDEFINITE.mirrored() == DefinitenessClass.INDEFINITE


def test_negated_matrix_mirrors_class():
    H = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, 2.0]])
    assert classify_hessian(-H).cls == classify_hessian(H).cls.mirrored()


def test_asymmetric_matrix_is_rejected():
    with pytest.raises(AsymmetryTooLarge):
        classify_hessian(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_non_finite_matrix_is_rejected():
    with pytest.raises(NonFiniteError):
        classify_hessian(np.array([[1.0, np.nan], [np.nan, 1.0]]))


def test_expectations():
    assert matches_expectation(DefinitenessClass.POSITIVE_SEMI_DEFINITE, "convex")
    assert not matches_expectation(DefinitenessClass.POSITIVE_SEMI_DEFINITE, "positive_definite")
    with pytest.raises(ValueError):
        matches_expectation(DefinitenessClass.INDEFINITE, "saddle")


# -- inequality tests --


def test_strict_convexity_without_positive_definite_hessian(quartic):
    assert classify_hessian(quartic.jet_at([0.0]).hessian).cls == DefinitenessClass.POSITIVE_SEMI_DEFINITE
    pairs = [([-1.0], [1.0]), ([0.0], [0.5]), ([-0.25], [0.0]), ([2.0], [-3.0])]
    assert gradient_monotonicity_test(quartic, pairs, strict=True).passed
    assert supporting_hyperplane_test(quartic, pairs, strict=True).passed
    assert segment_convexity_test(quartic, [-1.0], [1.0], strict=True).passed


def test_monotonicity_fails_on_saddle(saddle):
    result = gradient_monotonicity_test(saddle, [([0.0, 0.0], [0.0, 1.0])])
    assert not result.passed
    assert result.worst_residual == pytest.approx(-2.0)


def test_segment_fails_on_saddle(saddle):
    result = segment_convexity_test(saddle, [0.0, -1.0], [0.0, 1.0])
    assert not result.passed
    assert result.worst_index >= 0


def test_supporting_hyperplane_on_energy(polytropic_unit):
    field = polytropic_unit.energy_field()
    points = [[0.5, -0.2], [1.0, 0.0], [2.0, 0.7], [3.0, -1.0]]
    pairs = [(a, b) for a in points for b in points if a != b]
    assert supporting_hyperplane_test(field, pairs, strict=True).passed
    assert gradient_monotonicity_test(field, pairs).passed


def test_segment_must_stay_in_domain(polytropic_unit):
    field = polytropic_unit.energy_field()
    with pytest.raises(DomainViolation):
        segment_convexity_test(field, [-1.0, 0.0], [1.0, 0.0])


def test_equal_points_are_skipped(quartic):
    result = gradient_monotonicity_test(quartic, [([1.0], [1.0])])
    assert result.passed
    assert result.residuals == ()


def test_strict_hyperplane_skips_repeated_points(quartic):
    result = supporting_hyperplane_test(quartic, [([1.0], [1.0]), ([2.0], [1.0]), ([2.0], [2.0 + 1e-15])], strict=True)
    assert result.passed
    assert result.residuals == pytest.approx((11.0,))


# -- samplers and sweeps --


def test_random_sampler_is_deterministic():
    first = RandomSampler([0.0, 0.0], [1.0, 2.0], count=20, seed=11).sample()
    second = RandomSampler([0.0, 0.0], [1.0, 2.0], count=20, seed=11).sample()
    assert len(first) == 20
    assert all(np.array_equal(a, b) for a, b in zip(first, second))
    assert all(0.0 <= x[1] <= 2.0 for x in first)


def test_random_sampler_exhausts_on_tiny_acceptance():
    sampler = RandomSampler([0.0], [1.0], count=10, seed=3)
    with pytest.raises(SamplerExhausted):
        sampler.sample(lambda x: x[0] < 1e-6)


def test_grid_sampler_is_cell_centred():
    points = GridSampler([0.0, 0.0], [1.0, 1.0], resolution=2).sample()
    assert [tuple(p) for p in points] == [(0.25, 0.25), (0.25, 0.75), (0.75, 0.25), (0.75, 0.75)]


def test_grid_sampler_needs_two_points_per_axis():
    with pytest.raises(ValueError):
        GridSampler([0.0], [1.0], resolution=1)


def test_region_sweep_on_energy(polytropic_unit):
    field = polytropic_unit.energy_field()
    report = region_sweep(field, GridSampler([0.5, -1.0], [3.0, 1.0], 4), expect="positive")
    assert report.passed
    assert report.counts == {"PositiveDefinite": 16}
    assert report.uniform_bound > 0
    assert len(report.rows("u")) == 16


def test_region_sweep_reports_failures(saddle):
    report = region_sweep(saddle, RandomSampler([-1.0, -1.0], [1.0, 1.0], 5, seed=1), expect="positive")
    assert not report.passed
    assert len(report.failures) == 5
    assert report.worst_margin < 0


def test_violation_interval():
    coords = [(0.1, 1.0), (0.2, 2.0), (0.3, 3.0), (0.4, 4.0)]
    assert violation_interval(coords, [False, True, True, False], axis=1) == (2.0, 3.0)
    assert violation_interval(coords, [False] * 4, axis=0) is None


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
