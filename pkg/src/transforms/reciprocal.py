"""
ThermoCheck Reciprocal Involution
psi(w) = w_k phi(w / w_k with slot k replaced by 1 / w_k)
"""

import math
from typing import Optional, Sequence

import numpy as np

from src.core.errors import DimensionMismatch, PivotSignViolation
from src.fields.scalar_field import DomainSpec, PointLike, ScalarField, as_array
from src.transforms.base import TransformedField


def reciprocal_map(x: np.ndarray, k: int) -> np.ndarray:
    """The variable involution: slot k -> 1/x_k, others -> x_j/x_k (k is 0-based)"""
    y = x / x[k]
    y[k] = 1.0 / x[k]
    return y


def infer_pivot_sign(domain: DomainSpec, k: int) -> float:
    lo, hi = domain.lower[k], domain.upper[k]
    if lo >= 0.0:
        return 1.0
    if hi <= 0.0:
        return -1.0
    raise PivotSignViolation(
        f"Pivot variable {k + 1} may vanish inside the box ({lo}, {hi}); give the sign explicitly"
    )


def reciprocal(
    field: ScalarField,
    index: int,
    sign: Optional[float] = None,
    labels: Optional[Sequence[str]] = None,
) -> TransformedField:
    """Reciprocal involution with a 1-based pivot index"""
    m = field.dimension
    if not 1 <= index <= m:
        raise DimensionMismatch(f"Reciprocal pivot {index} outside 1..{m}")
    k = index - 1
    pivot_sign = float(sign) if sign is not None else infer_pivot_sign(field.domain, k)
    if pivot_sign not in (1.0, -1.0):
        raise ValueError(f"Pivot sign must be +1 or -1, got {sign}")

    lower = [-math.inf] * m
    upper = [math.inf] * m
    if pivot_sign > 0:
        lower[k] = 0.0
    else:
        upper[k] = 0.0

    def admissible(w: np.ndarray) -> bool:
        return field.contains(reciprocal_map(w, k))

    def expression(args):
        wk = args[k]
        inv = 1.0 / wk
        inner = [a * inv for a in args]
        inner[k] = inv
        return wk * field.expr(inner)

    def forward(x, parent_jet):
        return reciprocal_map(np.array(x, dtype=float), k)

    return TransformedField(
        parent=field,
        kind="reciprocal",
        dimension=m,
        domain=DomainSpec(tuple(lower), tuple(upper), admissible, f"reciprocal image of {field.provenance}"),
        expression=expression,
        forward_map=forward,
        labels=labels,
    )


def reciprocal_congruence_matrices(u: np.ndarray, k: int):
    """F = I + u_hat e_k^T and D = I with D_kk = -1/u_k, u_hat = u with slot k zeroed"""
    m = u.shape[0]
    u_hat = np.array(u, dtype=float)
    u_hat[k] = 0.0
    F = np.eye(m)
    F[:, k] += u_hat
    D = np.eye(m)
    D[k, k] = -1.0 / u[k]
    return F, D


def reciprocal_congruence_residual(
    field: ScalarField, transformed: ScalarField, index: int, u: PointLike
) -> float:
    """Relative Frobenius norm of D^T F^T psi_ww F D - u_k phi_uu at w = T(u)"""
    x = as_array(u)
    k = index - 1
    phi_uu = field.jet_at(x).hessian
    psi_ww = transformed.jet_at(reciprocal_map(x.copy(), k)).hessian
    F, D = reciprocal_congruence_matrices(x, k)
    lhs = D.T @ F.T @ psi_ww @ F @ D
    rhs = x[k] * phi_uu
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), np.finfo(float).tiny))
