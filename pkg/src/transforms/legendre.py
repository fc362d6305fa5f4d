"""
ThermoCheck Legendre Transformation
psi(w) = w.u - phi(u) with w = grad phi(u), evaluated by gradient-map inversion
"""

from typing import List, Optional, Sequence

import numpy as np

from src.core.errors import ThermoCheckError
from src.fields.jet import compose_jet2, value_of
from src.fields.scalar_field import DomainSpec, PointLike, ScalarField, as_array
from src.transforms.base import TransformedField
from src.transforms.solvers import DEFAULT_SETTINGS, SolverSettings, solve_gradient_map


def _solve(field: ScalarField, w: np.ndarray, seeds: List[np.ndarray], settings: SolverSettings):
    error: Optional[ThermoCheckError] = None
    for seed in seeds:
        try:
            return solve_gradient_map(field, w, seed, settings)
        except ThermoCheckError as e:
            error = e
    raise error


def legendre(
    field: ScalarField,
    seed: PointLike,
    settings: SolverSettings = DEFAULT_SETTINGS,
    concave: bool = False,
    extra_seeds: Sequence[PointLike] = (),
    labels: Optional[Sequence[str]] = None,
) -> TransformedField:
    """Legendre transform of a strictly convex (or, with a negative seed Hessian, concave) field.

    The result has gradient u and Hessian inv(phi_uu(u)). With concave=True value, gradient
    and Hessian are negated: psi(w) = phi(u) - w.u.
    """
    seeds = [as_array(seed)] + [as_array(s) for s in extra_seeds]
    sign = -1.0 if concave else 1.0
    m = field.dimension

    def expression(args):
        w = np.array([value_of(a) for a in args])
        u, jet = _solve(field, w, seeds, settings)
        hess_inv = np.linalg.inv(jet.hessian)
        hess_inv = 0.5 * (hess_inv + hess_inv.T)
        value = float(w @ u) - jet.value
        return compose_jet2(sign * value, sign * u, sign * hess_inv, args)

    def admissible(w: np.ndarray) -> bool:
        try:
            _solve(field, w, seeds, settings)
        except ThermoCheckError:
            return False
        return True

    def forward(x, parent_jet):
        return np.array(parent_jet.gradient)

    kind = "legendre_concave" if concave else "legendre"
    return TransformedField(
        parent=field,
        kind=kind,
        dimension=m,
        domain=DomainSpec.unbounded(m, admissible, f"gradient image of {field.provenance}"),
        expression=expression,
        forward_map=forward,
        labels=labels or tuple(f"d/d{label}" for label in field.labels),
        implicit=True,
    )


def legendre_concave(
    field: ScalarField,
    seed: PointLike,
    settings: SolverSettings = DEFAULT_SETTINGS,
    extra_seeds: Sequence[PointLike] = (),
    labels: Optional[Sequence[str]] = None,
) -> TransformedField:
    return legendre(field, seed, settings, concave=True, extra_seeds=extra_seeds, labels=labels)


def legendre_pairing_residual(field: ScalarField, dual: ScalarField, u: PointLike) -> float:
    """|phi(u) + psi(w) - u.w| relative to the magnitudes involved, with w = grad phi(u)"""
    x = as_array(u)
    jet = field.jet_at(x)
    w = jet.gradient
    psi = dual.value(w)
    if getattr(dual, "kind", "") == "legendre_concave":
        psi = -psi
    uw = float(x @ w)
    scale = max(abs(jet.value), abs(psi), abs(uw), np.finfo(float).tiny)
    return abs(jet.value + psi - uw) / scale


def hessian_identity_residual(field: ScalarField, dual: ScalarField, u: PointLike) -> float:
    """||psi_ww(w) phi_uu(u) - I||_F with w = grad phi(u)"""
    x = as_array(u)
    jet = field.jet_at(x)
    psi_ww = dual.jet_at(jet.gradient).hessian
    if getattr(dual, "kind", "") == "legendre_concave":
        psi_ww = -psi_ww
    return float(np.linalg.norm(psi_ww @ jet.hessian - np.eye(x.shape[0])))
