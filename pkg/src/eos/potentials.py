"""
ThermoCheck Thermodynamic Potentials
Entropy, Gibbs free energy, the Legendre dual energy and extensive fields built from u(v,s)
"""

import numpy as np

from src.eos.eos_factory import BaseEOS
from src.fields.scalar_field import ScalarField
from src.transforms.affine import affine, sign_flip
from src.transforms.base import TransformedField
from src.transforms.exchange import exchange
from src.transforms.legendre import legendre, legendre_concave
from src.transforms.solvers import DEFAULT_SETTINGS, SolverSettings

S_VU_LABELS = ("v [m^3/kg]", "u [J/kg]")
GIBBS_LABELS = ("-p [Pa]", "theta [K]")


def exchange_to_s_of_vu(
    field: ScalarField, seed: float = 0.0, settings: SolverSettings = DEFAULT_SETTINGS
) -> TransformedField:
    """s(v,u) from u(v,s) by exchanging u with s; needs u_s = theta > 0"""
    return exchange(field, 2, seed, settings, expected_sign=1.0, labels=S_VU_LABELS)


def entropy_field(eos: BaseEOS, settings: SolverSettings = DEFAULT_SETTINGS) -> TransformedField:
    return exchange_to_s_of_vu(eos.energy_field(), eos.reference.s, settings)


def gibbs_free_energy(eos: BaseEOS, settings: SolverSettings = DEFAULT_SETTINGS) -> TransformedField:
    """g(p,theta) = u + p v - theta s, concave in (p, theta)"""
    ref = eos.reference
    g_hat = legendre_concave(eos.energy_field(), np.array([ref.v, ref.s]), settings, labels=GIBBS_LABELS)
    return sign_flip(g_hat, (-1.0, 1.0), labels=("p [Pa]", "theta [K]"))


def legendre_dual_energy(eos: BaseEOS, settings: SolverSettings = DEFAULT_SETTINGS) -> TransformedField:
    """u_hat(-p,theta) = theta s - p v - u, convex"""
    ref = eos.reference
    return legendre(eos.energy_field(), np.array([ref.v, ref.s]), settings, labels=GIBBS_LABELS)


def extensive_energy_field(eos: BaseEOS, mass: float = 1.0) -> TransformedField:
    """U(V,S) = M u(V/M, S/M)"""
    if mass <= 0:
        raise ValueError(f"Mass must be positive, got {mass}")
    return affine(
        eos.energy_field(),
        np.diag([1.0 / mass, 1.0 / mass]),
        factor=mass,
        labels=("V [m^3]", "S [J/K]"),
    )
