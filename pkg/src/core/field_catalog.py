"""
ThermoCheck Field Catalog
Named quantities that the eval and list verbs can evaluate
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence

import numpy as np
from scipy.linalg import eigvalsh

from src.core.errors import ConfigError, DimensionMismatch
from src.eos.eos_factory import BaseEOS
from src.eos.potentials import entropy_field, gibbs_free_energy, legendre_dual_energy
from src.euler.densities import (
    energy_density_field,
    entropy_density_conserved,
    internal_energy_density_field,
    kinetic_density_field,
)
from src.euler.symmetrizer import reference_conserved_state
from src.fields.scalar_field import ScalarField

SHOW_CHOICES = ("value", "gradient", "hessian", "hessian-eigenvalues", "all")


@dataclass(frozen=True)
class Quantity:
    name: str
    description: str
    build: Callable[[BaseEOS, int], ScalarField]
    reference: Callable[[BaseEOS, int], Sequence[float]]


def _ref_vs(eos: BaseEOS, d: int):
    return (eos.reference.v, eos.reference.s)


def _ref_v_theta(eos: BaseEOS, d: int):
    return (eos.reference.v, eos.reference.theta)


def _ref_rho_theta(eos: BaseEOS, d: int):
    return (1.0 / eos.reference.v, eos.reference.theta)


QUANTITIES: Dict[str, Quantity] = {
    q.name: q
    for q in [
        Quantity("u", "fundamental form u(v,s)", lambda eos, d: eos.energy_field(), _ref_vs),
        Quantity("p_vs", "pressure p(v,s) = -u_v", lambda eos, d: eos.pressure_vs_field(), _ref_vs),
        Quantity("theta", "temperature theta(v,s) = u_s", lambda eos, d: eos.temperature_vs_field(), _ref_vs),
        Quantity("p", "thermal equation p(rho,theta)", lambda eos, d: eos.thermal_field("rho_theta"), _ref_rho_theta),
        Quantity("p_v_theta", "thermal equation p(v,theta)", lambda eos, d: eos.thermal_field("v_theta"), _ref_v_theta),
        Quantity("u_v_theta", "caloric equation u(v,theta)", lambda eos, d: eos.caloric_field("v_theta"), _ref_v_theta),
        Quantity(
            "s",
            "specific entropy s(v,u) by exchange",
            lambda eos, d: entropy_field(eos),
            lambda eos, d: (eos.reference.v, eos.reference.u),
        ),
        Quantity(
            "gibbs",
            "Gibbs free energy g(p,theta)",
            lambda eos, d: gibbs_free_energy(eos),
            lambda eos, d: (eos.reference.p, eos.reference.theta),
        ),
        Quantity(
            "legendre-dual",
            "Legendre dual energy u_hat(-p,theta)",
            lambda eos, d: legendre_dual_energy(eos),
            lambda eos, d: (-eos.reference.p, eos.reference.theta),
        ),
        Quantity(
            "internal-energy-density",
            "internal energy density U_bar(rho,S_bar)",
            lambda eos, d: internal_energy_density_field(eos),
            lambda eos, d: (1.0 / eos.reference.v, eos.reference.s / eos.reference.v),
        ),
        Quantity(
            "kinetic-density",
            "kinetic energy density |M|^2/(2 rho)",
            lambda eos, d: kinetic_density_field(d),
            lambda eos, d: (1.0 / eos.reference.v,) + (0.0,) * d,
        ),
        Quantity(
            "energy-density",
            "total energy density E_bar(rho,M_bar,S_bar)",
            energy_density_field,
            lambda eos, d: (1.0 / eos.reference.v,) + (0.0,) * d + (eos.reference.s / eos.reference.v,),
        ),
        Quantity(
            "entropy-density",
            "entropy density S_bar(rho,M_bar,E_bar)",
            lambda eos, d: entropy_density_conserved(eos, d),
            lambda eos, d: tuple(reference_conserved_state(eos, d)),
        ),
    ]
}


def quantity_names() -> List[str]:
    return list(QUANTITIES)


def resolve_point(quantity: Quantity, eos: BaseEOS, d: int, point: str) -> np.ndarray:
    """"reference" or comma-separated coordinates"""
    if point.strip() == "reference":
        return np.asarray(quantity.reference(eos, d), dtype=float)
    try:
        return np.array([float(c) for c in point.split(",")])
    except ValueError:
        raise ConfigError(f"Point must be 'reference' or comma-separated numbers, got {point!r}")


def evaluate_quantity(name: str, eos: BaseEOS, d: int, point: str, show: str = "all") -> Dict[str, Any]:
    """Value, gradient, Hessian and/or Hessian eigenvalues of a named quantity at one point"""
    if name not in QUANTITIES:
        raise ConfigError(f"Unknown quantity: {name} (known: {', '.join(QUANTITIES)})")
    if show not in SHOW_CHOICES:
        raise ConfigError(f"Unknown --show choice: {show}")
    quantity = QUANTITIES[name]
    field = quantity.build(eos, d)
    x = resolve_point(quantity, eos, d, point)
    if x.shape[0] != field.dimension:
        raise DimensionMismatch(f"{name} takes {field.dimension} coordinates, got {x.shape[0]}")

    jet = field.jet_at(x)
    result: Dict[str, Any] = {"quantity": name, "field": field.provenance, "point": x.tolist()}
    if show in ("value", "all"):
        result["value"] = jet.value
    if show in ("gradient", "all"):
        result["gradient"] = np.asarray(jet.gradient).tolist()
    if show in ("hessian", "all"):
        result["hessian"] = np.asarray(jet.hessian).tolist()
    if show in ("hessian-eigenvalues", "all"):
        result["hessian_eigenvalues"] = eigvalsh(np.asarray(jet.hessian)).tolist()
    return result
