"""Shared EOS fixtures"""

import numpy as np
import pytest

from src.eos.eos_factory import EOSFactory

TAIT_WATER = {
    "nu": 7.15,
    "v_r": 1.0,
    "K_r": 2200.0,
    "p_r": 0.1,
    "theta_r": 293.15,
    "c_vr": 4.18,
    "D": 1.45e-4,
    "s_r": 0.296,
    "u_r": 84.0,
}


@pytest.fixture
def polytropic():
    """Diatomic gas of the desk preset: c_v = 0.01, theta_0 = 100"""
    return EOSFactory.create_eos("polytropic", {"R": 0.004, "gamma": 1.4}, {"v": 1.0, "s": 0.0, "u": 1.0})


@pytest.fixture
def polytropic_unit():
    """R = 1, gamma = 7/5, so c_v = 2.5"""
    return EOSFactory.create_eos("polytropic", {"R": 1.0, "gamma": 1.4}, {"v": 1.0, "s": 0.0, "u": 2.5})


@pytest.fixture
def vdw():
    return EOSFactory.create_eos(
        "vdw", {"a": 1.0, "b": 0.1, "R": 1.0, "c_v": 2.5}, {"v": 1.0, "s": 0.0, "theta": 3.0}
    )


@pytest.fixture
def tait():
    return EOSFactory.create_eos("tait", dict(TAIT_WATER), {})


@pytest.fixture
def tait_unstable():
    return EOSFactory.create_eos("tait", {**TAIT_WATER, "c_vr": -4.18}, {})


@pytest.fixture
def rho_theta_probes():
    """(rho, theta) states inside the polytropic desk box"""
    rng = np.random.default_rng(7)
    rho = rng.uniform(0.2, 5.0, 12)
    theta = rng.uniform(60.0, 900.0, 12)
    return [np.array([r, t]) for r, t in zip(rho, theta)]


@pytest.fixture
def vs_probes(polytropic, rho_theta_probes):
    return [polytropic.vs_from_v_theta(1.0 / x[0], x[1]) for x in rho_theta_probes]


@pytest.fixture
def tait_probes(tait):
    """(v, s) states of the water-like Tait liquid"""
    points = []
    for v in (0.996, 0.998, 1.0):
        for theta in (285.0, 293.15, 300.0):
            points.append(tait.vs_from_v_theta(v, theta))
    return points
