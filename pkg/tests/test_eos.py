"""Tests for the polytropic, van der Waals and Tait equations of state"""

import numpy as np
import pytest

from src.core.errors import ConfigError, DomainViolation
from src.eos.eos_factory import EOSFactory
from src.eos.ideal_gas import IdealPolytropicParams, ideal_pressure, polytropic_pressure
from src.eos.potentials import entropy_field, gibbs_free_energy
from src.eos.tait import TaitParams, tait_pressure, tait_temperature
from src.eos.van_der_waals import vdw_critical_point, vdw_pressure
from tests.conftest import TAIT_WATER


# -- polytropic gas --


def test_ideal_pressure_direct_substitution():
    params = IdealPolytropicParams.from_any(R=4.0, gamma=1.4)
    assert ideal_pressure(params, 2.0, 3.0) == pytest.approx(24.0)


def test_parameter_completion():
    params = IdealPolytropicParams.from_any(c_v=2.5, c_p=3.5)
    assert params.R == pytest.approx(1.0)
    assert params.gamma == pytest.approx(1.4)


def test_parameter_completion_needs_exactly_two():
    with pytest.raises(ValueError):
        IdealPolytropicParams.from_any(R=1.0)
    with pytest.raises(ValueError):
        IdealPolytropicParams.from_any(R=1.0, c_v=2.5, gamma=1.4)


def test_polytropic_pressure_from_energy():
    params = IdealPolytropicParams.from_any(R=1.0, gamma=1.4)
    assert polytropic_pressure(params, 2.0, 5.0) == pytest.approx(4.0)
    with pytest.raises(DomainViolation):
        polytropic_pressure(params, -1.0, 5.0)


def test_polytropic_reference_state(polytropic):
    ref = polytropic.reference
    assert ref.theta == pytest.approx(100.0)
    assert polytropic.energy_vs(ref.v, ref.s) == pytest.approx(ref.u)
    assert polytropic.temperature_vs(ref.v, ref.s) == pytest.approx(ref.theta)
    assert polytropic.entropy_v_theta(ref.v, ref.theta) == pytest.approx(ref.s, abs=1e-15)


def test_caloric_and_thermal_forms(polytropic_unit):
    assert polytropic_unit.pressure_v_theta(0.5, 3.0) == pytest.approx(6.0)
    assert polytropic_unit.energy_v_theta(0.5, 3.0) == pytest.approx(7.5)


# -- shared identities --


@pytest.mark.parametrize("name", ["polytropic", "vdw", "tait"])
def test_gibbs_relations_hold(name, request):
    eos = request.getfixturevalue(name)
    v, theta = (0.998, 290.0) if name == "tait" else (1.2, 4.0)
    x = eos.vs_from_v_theta(v, theta)
    jet = eos.energy_field().jet_at(x)
    assert jet.gradient[0] == pytest.approx(-float(eos.pressure_vs(x[0], x[1])), rel=1e-10)
    assert jet.gradient[1] == pytest.approx(float(eos.temperature_vs(x[0], x[1])), rel=1e-10)
    assert float(eos.temperature_vs(x[0], x[1])) == pytest.approx(theta, rel=1e-12)


@pytest.mark.parametrize("name", ["polytropic", "vdw", "tait"])
def test_pressure_from_specific_energy(name, request):
    eos = request.getfixturevalue(name)
    v, theta = (0.998, 290.0) if name == "tait" else (1.2, 4.0)
    e = float(eos.energy_v_theta(v, theta))
    assert float(eos.pressure_rho_e(1.0 / v, e)) == pytest.approx(float(eos.pressure_v_theta(v, theta)), rel=1e-10)


def test_factory_rejects_unknown_family():
    with pytest.raises(ConfigError):
        EOSFactory.create_eos("stiffened", {}, {})


def test_factory_wraps_bad_parameters():
    with pytest.raises(ConfigError):
        EOSFactory.create_eos("vdw", {"a": 1.0, "b": 0.1, "R": -1.0, "c_v": 2.5}, {})
    with pytest.raises(ConfigError):
        EOSFactory.create_eos("polytropic", {"R": 1.0, "kappa": 2.0}, {})


# -- van der Waals --


def test_critical_point_matches_closed_form(vdw):
    v_c, theta_c, p_c = vdw_critical_point(vdw)
    a, b, R = 1.0, 0.1, 1.0
    assert v_c == pytest.approx(3.0 * b, rel=1e-8)
    assert theta_c == pytest.approx(8.0 * a / (27.0 * R * b), rel=1e-8)
    assert theta_c == pytest.approx(vdw.critical_temperature(), rel=1e-8)
    assert p_c == pytest.approx(a / (27.0 * b * b), rel=1e-7)


def test_vdw_pressure_needs_v_above_b(vdw):
    with pytest.raises(DomainViolation):
        vdw_pressure(vdw.params, 0.05, 3.0)


def test_vdw_energy_field_excludes_covolume(vdw):
    assert not vdw.energy_field().contains([0.1, 0.0])
    assert vdw.energy_field().contains([0.2, 0.0])


# -- Tait liquid --


def test_tait_reference_reduction(tait):
    p = tait.params
    assert tait_temperature(p, p.v_r, p.s_r) == pytest.approx(p.theta_r)
    assert tait.temperature_vs(p.v_r, p.s_r) == pytest.approx(p.theta_r)
    assert tait_pressure(p, p.v_r, p.s_r) == pytest.approx(p.p_r + p.D * p.theta_r)


def test_tait_saturation_form_offset(tait):
    p = tait.params
    for v, theta in [(0.997, 285.0), (1.0, 300.0)]:
        gap = float(tait.pressure_v_theta(v, theta)) - float(tait.saturation_form_pressure(v, theta))
        assert gap == pytest.approx(p.D * p.theta_r, rel=1e-9)


def test_tait_heat_capacity_is_linear_in_theta(tait):
    jet = tait.caloric_field("v_theta").jet_at([0.999, 290.0])
    assert jet.gradient[1] == pytest.approx(tait.params.C * 290.0)


def test_tait_condition_labels(tait):
    assert tait.condition_labels()["U_SS"] == "U_SS = 1/C"


def test_tait_parameter_validation():
    with pytest.raises(ValueError):
        TaitParams(**{**TAIT_WATER, "nu": 0.5})
    with pytest.raises(ValueError):
        TaitParams(**{**TAIT_WATER, "c_vr": 0.0})


def test_tait_negative_heat_capacity_is_accepted(tait_unstable):
    assert tait_unstable.params.C < 0


# -- potentials --


def test_entropy_inverts_energy(polytropic):
    s_of_vu = entropy_field(polytropic)
    x = np.array([1.7, 0.003])
    u = float(polytropic.energy_vs(x[0], x[1]))
    jet = s_of_vu.jet_at([x[0], u])
    theta = float(polytropic.temperature_vs(x[0], x[1]))
    p = float(polytropic.pressure_vs(x[0], x[1]))
    assert jet.value == pytest.approx(x[1], abs=1e-12)
    assert jet.gradient[1] == pytest.approx(1.0 / theta, rel=1e-10)
    assert jet.gradient[0] == pytest.approx(p / theta, rel=1e-10)


def test_gibbs_free_energy_gradient(polytropic):
    g = gibbs_free_energy(polytropic)
    x = np.array([1.5, 0.002])
    p = float(polytropic.pressure_vs(x[0], x[1]))
    theta = float(polytropic.temperature_vs(x[0], x[1]))
    jet = g.jet_at([p, theta])
    # g_p = v and g_theta = -s
    assert jet.gradient[0] == pytest.approx(x[0], rel=1e-9)
    assert jet.gradient[1] == pytest.approx(-x[1], abs=1e-10)
    assert np.all(np.linalg.eigvalsh(jet.hessian) < 0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
