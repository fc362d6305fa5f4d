"""Tests for conserved states, density potentials, fluxes and the symmetric form"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.convexity.definiteness import DefinitenessClass, classify_hessian, relative_asymmetry
from src.core.errors import DimensionMismatch, DomainViolation
from src.eos.eos_factory import EOSFactory
from src.euler.conserved import (
    ConservedState,
    primitive_to_conserved,
    primitive_to_density_coords,
    split_primitive,
)
from src.euler.densities import (
    compare_entropy_routes,
    energy_density_field,
    entropy_density_conserved,
    kinetic_density_field,
    kinetic_density_hessian,
    kinetic_hyperplane_residual,
    relative_energy,
)
from src.euler.fluxes import entropy_pair_consistency, euler_flux, flux_jacobian
from src.euler.symmetrizer import (
    build_symmetrizer,
    convex_entropy_field,
    godunov_chain,
    main_field_jacobian,
    reference_conserved_state,
    symmetrizer_sweep,
)
from src.fields.scalar_field import DomainSpec, ScalarField
from src.transforms.legendre import legendre

PRIMITIVES = [
    (1.0, (0.3, -0.2), 1.0),
    (0.5, (0.0, 0.4), 2.0),
    (2.0, (-0.5, 0.1), 0.7),
    (1.5, (0.2, 0.2), 3.0),
]


@pytest.fixture
def states(polytropic_unit):
    return [primitive_to_conserved(polytropic_unit, rho, vel, theta) for rho, vel, theta in PRIMITIVES]


@pytest.fixture
def density_coords(polytropic_unit):
    return [primitive_to_density_coords(polytropic_unit, rho, vel, theta) for rho, vel, theta in PRIMITIVES]


# -- conserved states --


def test_conserved_state_rejects_vacuum():
    with pytest.raises(DomainViolation):
        ConservedState(0.0, (0.0,), 1.0)


def test_conserved_state_rejects_negative_internal_energy():
    with pytest.raises(DomainViolation):
        ConservedState(1.0, (2.0,), 1.0)


def test_conserved_state_dimension_limits():
    with pytest.raises(DimensionMismatch):
        ConservedState(1.0, (0.0, 0.0, 0.0, 0.0), 1.0)
    with pytest.raises(DimensionMismatch):
        ConservedState.from_array([1.0, 1.0])


def test_primitive_maps(polytropic_unit):
    state = primitive_to_conserved(polytropic_unit, 2.0, [0.5, -1.0], 3.0)
    assert state.momentum == (1.0, -2.0)
    assert state.specific_internal_energy == pytest.approx(7.5)
    assert state.energy == pytest.approx(2.0 * (7.5 + 0.625))
    rho, vel, theta = split_primitive([2.0, 0.5, -1.0, 3.0])
    assert rho == 2.0 and theta == 3.0
    assert_allclose(vel, [0.5, -1.0])


# -- density potentials --


def test_energy_density_matches_conserved_energy(polytropic_unit, states, density_coords):
    field = energy_density_field(polytropic_unit, 2)
    for (_, _, theta), state, x in zip(PRIMITIVES, states, density_coords):
        jet = field.jet_at(x)
        assert jet.value == pytest.approx(state.energy, rel=1e-12)
        assert jet.gradient[-1] == pytest.approx(theta, rel=1e-10)
        assert classify_hessian(jet.hessian).cls == DefinitenessClass.POSITIVE_DEFINITE


def test_entropy_density_is_strictly_concave(polytropic_unit, states):
    field = entropy_density_conserved(polytropic_unit, 2)
    for state in states:
        verdict = classify_hessian(field.jet_at(state.array).hessian)
        assert verdict.cls == DefinitenessClass.NEGATIVE_DEFINITE


def test_entropy_gradient_is_the_main_field(polytropic_unit, states):
    field = entropy_density_conserved(polytropic_unit, 2)
    (_, vel, theta), state = PRIMITIVES[0], states[0]
    grad = field.jet_at(state.array).gradient
    # S_bar_E = 1/theta and S_bar_M = -velocity/theta
    assert grad[-1] == pytest.approx(1.0 / theta, rel=1e-10)
    assert_allclose(grad[1:-1], -np.asarray(vel) / theta, rtol=1e-10, atol=1e-14)


def test_entropy_routes_agree(polytropic_unit, states):
    report = compare_entropy_routes(polytropic_unit, 2, [s.array for s in states])
    assert report.passed, report.to_dict()


# -- kinetic energy density --


def test_kinetic_hessian_is_semi_definite():
    kinetic = kinetic_density_hessian(2.0, [1.0, -0.5, 0.3])
    verdict = classify_hessian(kinetic.matrix)
    assert verdict.cls == DefinitenessClass.POSITIVE_SEMI_DEFINITE
    assert verdict.zero_count == 1
    assert kinetic.residual < 1e-14


def test_kinetic_hessian_matches_jet():
    x = np.array([2.0, 1.0, -0.5, 0.3])
    jet = kinetic_density_field(3).jet_at(x)
    assert_allclose(jet.hessian, kinetic_density_hessian(x[0], x[1:]).matrix, rtol=1e-14, atol=1e-15)


def test_kinetic_hyperplane_gap_closed_form():
    gap, closed = kinetic_hyperplane_residual([1.0, 1.0, 2.0], [2.0, 1.0, -1.0])
    assert gap == pytest.approx(3.25)
    assert closed == pytest.approx(3.25)


def test_kinetic_hyperplane_gap_vanishes_on_rays():
    gap, closed = kinetic_hyperplane_residual([3.0, 1.5, -0.6], [1.0, 0.5, -0.2])
    assert gap == pytest.approx(0.0, abs=1e-14)
    assert closed == pytest.approx(0.0, abs=1e-14)


# -- relative energy --


def test_relative_energy_of_quadratic_is_half_squared_distance():
    field = ScalarField(2, DomainSpec.unbounded(2), lambda a: (a[0] * a[0] + a[1] * a[1]) * 0.5, "|x|^2/2")
    u1, u2 = np.array([1.0, 2.0]), np.array([-0.5, 0.5])
    assert relative_energy(None, 2, u1, u2, field) == pytest.approx(0.5 * float((u1 - u2) @ (u1 - u2)))


def test_relative_energy_is_positive(polytropic_unit, density_coords):
    field = energy_density_field(polytropic_unit, 2)
    for a in density_coords:
        for b in density_coords:
            value = relative_energy(polytropic_unit, 2, a, b, field)
            if a is b:
                assert abs(value) <= 1e-12 * field.value(a)
            else:
                assert value > 0


# -- fluxes --


def test_flux_at_rest_is_pressure(polytropic_unit):
    state = primitive_to_conserved(polytropic_unit, 1.0, [0.0, 0.0, 0.0], 2.0)
    assert_allclose(euler_flux(state, polytropic_unit, 1), [0.0, 2.0, 0.0, 0.0, 0.0], atol=1e-14)
    assert_allclose(euler_flux(state, polytropic_unit, 3), [0.0, 0.0, 0.0, 2.0, 0.0], atol=1e-14)


def test_flux_jacobian_wave_speeds(polytropic_unit):
    rho, v, theta = 1.2, 0.3, 2.0
    state = primitive_to_conserved(polytropic_unit, rho, [v], theta)
    c = math.sqrt(1.4 * rho * theta / rho)
    speeds = np.sort(np.linalg.eigvals(flux_jacobian(state, polytropic_unit, 1)).real)
    assert_allclose(speeds, [v - c, v, v + c], rtol=1e-10)


def test_flux_direction_out_of_range(polytropic_unit, states):
    with pytest.raises(DimensionMismatch):
        euler_flux(states[0], polytropic_unit, 3)


def test_entropy_pair_consistency(polytropic_unit, states):
    report = entropy_pair_consistency(polytropic_unit, 2, [s.array for s in states])
    assert report.passed, report.to_dict()


def test_wrong_entropy_flux_fails(polytropic_unit, states):
    report = entropy_pair_consistency(polytropic_unit, 2, [s.array for s in states], flux_factor=2.0)
    assert not report.passed


# -- symmetric form --


def test_reference_conserved_state(polytropic_unit):
    assert_allclose(reference_conserved_state(polytropic_unit, 2), [1.0, 0.0, 0.0, 2.5])


def test_main_field_jacobian_inverts_entropy_hessian(polytropic_unit, states):
    field = entropy_density_conserved(polytropic_unit, 2)
    for (rho, vel, theta), state in zip(PRIMITIVES, states):
        J = main_field_jacobian(polytropic_unit, rho, vel, theta)
        phi_uu = -np.asarray(field.jet_at(state.array).hessian)
        assert_allclose(J @ phi_uu, np.eye(4), atol=1e-9)
        assert relative_asymmetry(J) < 1e-11


def test_symmetrizer_flags_mismatched_equation_of_state(polytropic_unit, states):
    """w and Phi_uu from the gamma = 1.4 gas, primitive maps from a gamma = 5/3 gas"""
    monatomic = EOSFactory.create_eos("polytropic", {"R": 1.0, "gamma": 5.0 / 3.0}, {"v": 1.0, "s": 0.0, "u": 1.5})
    S_field = entropy_density_conserved(polytropic_unit, 2)
    potential = legendre(convex_entropy_field(S_field), reference_conserved_state(polytropic_unit, 2))
    matched = build_symmetrizer(polytropic_unit, 2, states[0], S_field, potential)
    mismatched = build_symmetrizer(monatomic, 2, states[0], S_field, potential)
    assert matched.passed
    assert matched.diagnostics["L_ww_routes"] < 1e-9
    assert mismatched.diagnostics["L_ww_routes"] > 1e-3
    assert not mismatched.passed


@pytest.mark.parametrize("d", [1, 3])
def test_symmetrizer_sweep(polytropic_unit, d):
    states = [
        primitive_to_conserved(polytropic_unit, rho, (list(vel) + [0.1])[:d], theta)
        for rho, vel, theta in PRIMITIVES
    ]
    sweep = symmetrizer_sweep(polytropic_unit, d, states)
    assert sweep.passed, sweep.to_dict()
    assert sweep.uniform_bound > 0
    for system in sweep.systems:
        assert system.verdict.cls == DefinitenessClass.POSITIVE_DEFINITE


def test_godunov_chain_matches_legendre_potential(polytropic_unit):
    probes = [polytropic_unit.vs_from_v_theta(v, theta) for v in (0.7, 1.4) for theta in (0.8, 1.5)]
    report = godunov_chain(polytropic_unit, 2, probes)
    assert report.passed, report.to_dict()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
