"""
ThermoCheck Exchange Involution
Swap a strictly monotone function with one of its variables: psi(phi(u), u_hat) = u_k
"""

from typing import Callable, Optional, Sequence, Union

import numpy as np

from src.core.errors import DimensionMismatch, MonotonicityViolation, ThermoCheckError
from src.fields.jet import Jet, compose_jet2, value_of
from src.fields.scalar_field import DomainSpec, Jet2, PointLike, ScalarField, as_array
from src.transforms.base import TransformedField
from src.transforms.solvers import DEFAULT_SETTINGS, SolverSettings, solve_pivot

Seed = Union[float, Callable[[np.ndarray], float]]


def pivot_jet(jet: Jet2, w: np.ndarray, k: int, x_k: float) -> Jet:
    """Jet of psi at w by implicit differentiation of phi(w with slot k = x) = w_k.

    jet is phi's jet at the solved point and x_k the solved pivot. Two chord steps
    x <- x - (phi(...x...) - w_k) / phi_k are taken in jet arithmetic over w, starting
    from the constant x_k; each step gains one order, so the result is exact to second order.
    """
    m = w.shape[0]
    a = jet.gradient[k]
    variables = [Jet.variable(float(wi), i, m) for i, wi in enumerate(w)]
    x = Jet.constant(x_k, m)
    for _ in range(2):
        inputs = list(variables)
        inputs[k] = x
        residual = compose_jet2(jet.value, jet.gradient, jet.hessian, inputs) - variables[k]
        step = x - residual * (1.0 / a)
        x = Jet(x_k, step.grad, step.hess)
    return x


def exchange(
    field: ScalarField,
    index: int,
    seed: Seed,
    settings: SolverSettings = DEFAULT_SETTINGS,
    expected_sign: Optional[float] = None,
    labels: Optional[Sequence[str]] = None,
) -> TransformedField:
    """Exchange the field value with variable `index` (1-based).

    Evaluation at w solves phi(w with slot k = x) = w_k for x by safeguarded Newton with a
    bracketing fallback. seed is the starting pivot value, or a callable of w giving it.
    """
    m = field.dimension
    if not 1 <= index <= m:
        raise DimensionMismatch(f"Exchange pivot {index} outside 1..{m}")
    k = index - 1
    sign = float(expected_sign) if expected_sign else 0.0
    where = f"exchange({field.provenance}, {index})"

    def solve(w: np.ndarray):
        start = seed(w) if callable(seed) else float(seed)
        u = np.array(w, dtype=float)

        def pivot_func(x: float):
            u[k] = x
            jet = field.jet_at(u, active=(k,))
            return jet.value, jet.gradient[0]

        x = solve_pivot(pivot_func, float(w[k]), start, settings, sign, where)
        u[k] = x
        jet = field.jet_at(u)
        a = jet.gradient[k]
        if a == 0.0 or (sign and np.sign(a) != sign):
            raise MonotonicityViolation(f"{where}: pivot derivative {a:.3e} at solution", tuple(u))
        return u, jet

    def expression(args):
        w = np.array([value_of(a) for a in args])
        u, jet = solve(w)
        x = pivot_jet(jet, w, k, float(u[k]))
        return compose_jet2(x.value, x.grad, x.hess, args)

    def admissible(w: np.ndarray) -> bool:
        try:
            solve(w)
        except ThermoCheckError:
            return False
        return True

    def forward(x, parent_jet):
        y = np.array(x, dtype=float)
        y[k] = parent_jet.value
        return y

    lower = list(field.domain.lower)
    upper = list(field.domain.upper)
    lower[k], upper[k] = -np.inf, np.inf

    return TransformedField(
        parent=field,
        kind="exchange",
        dimension=m,
        domain=DomainSpec(tuple(lower), tuple(upper), admissible, f"exchange image of {field.provenance}"),
        expression=expression,
        forward_map=forward,
        labels=labels,
        implicit=True,
    )


def exchange_congruence_matrices(gradient: np.ndarray, k: int):
    """F = I + e_k g_hat^T (g_hat = phi_u with slot k zeroed) and D = I with D_kk = phi_k"""
    m = gradient.shape[0]
    g_hat = np.array(gradient, dtype=float)
    g_hat[k] = 0.0
    F = np.eye(m)
    F[k, :] += g_hat
    D = np.eye(m)
    D[k, k] = gradient[k]
    return F, D


def exchange_congruence_residual(
    field: ScalarField, transformed: ScalarField, index: int, u: PointLike
) -> float:
    """Relative Frobenius norm of D^T F^T psi_ww F D + (1/phi_k) phi_uu at w = (phi(u), u_hat)"""
    x = as_array(u)
    k = index - 1
    jet = field.jet_at(x)
    w = x.copy()
    w[k] = jet.value
    psi_ww = transformed.jet_at(w).hessian
    F, D = exchange_congruence_matrices(jet.gradient, k)
    lhs = D.T @ F.T @ psi_ww @ F @ D
    rhs = -jet.hessian / jet.gradient[k]
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), np.finfo(float).tiny))
