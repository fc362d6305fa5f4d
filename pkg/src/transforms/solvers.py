"""
ThermoCheck Implicit Solvers
Damped Newton for gradient-map inversion and a safeguarded scalar pivot solve
"""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import brentq

from src.core.errors import (
    BracketFailure,
    MonotonicityViolation,
    NewtonDivergence,
    SingularHessian,
    ThermoCheckError,
)
from src.fields.scalar_field import Jet2, ScalarField
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and iteration limits for implicit inversions"""

    tolerance: float = 1e-12
    max_iterations: int = 50
    bracket_step: float = 1.0
    max_expansions: int = 60
    cond_max: float = 1e13

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "max_iterations": self.max_iterations,
            "bracket_step": self.bracket_step,
            "max_expansions": self.max_expansions,
            "cond_max": self.cond_max,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolverSettings":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


DEFAULT_SETTINGS = SolverSettings()


def _try_jet(field: ScalarField, x: np.ndarray, active=None):
    try:
        return field.jet_at(x, active=active)
    except ThermoCheckError:
        return None


def check_condition(hessian: np.ndarray, settings: SolverSettings, where: str, point=None) -> float:
    cond = np.linalg.cond(hessian)
    if not np.isfinite(cond) or cond > settings.cond_max:
        raise SingularHessian(f"{where}: Hessian condition number {cond:.3e}", point)
    return float(cond)


def solve_gradient_map(
    field: ScalarField,
    target: np.ndarray,
    seed: np.ndarray,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> Tuple[np.ndarray, Jet2]:
    """Find u with grad field(u) = target.

    Minimizes sigma*(field(u) - target.u) by damped Newton, where sigma is the sign of
    the Hessian at the seed, so concave fields are handled too. Steps that leave the
    domain or fail to decrease the merit function are halved.
    """
    u = np.array(seed, dtype=float)
    jet = field.jet_at(u)
    eig = np.linalg.eigvalsh(jet.hessian)
    sigma = 1.0 if eig[-1] >= -eig[0] else -1.0

    def merit(j: Jet2, x: np.ndarray) -> float:
        return sigma * (j.value - float(target @ x))

    for iteration in range(settings.max_iterations + 1):
        r = jet.gradient - target
        scale = np.abs(target) + np.abs(jet.hessian) @ np.maximum(1.0, np.abs(u))
        if np.all(np.abs(r) <= settings.tolerance * np.maximum(scale, np.finfo(float).tiny)):
            check_condition(jet.hessian, settings, field.provenance, tuple(u))
            return u, jet
        if iteration == settings.max_iterations:
            break
        check_condition(jet.hessian, settings, field.provenance, tuple(u))
        step = -np.linalg.solve(jet.hessian, r)
        f0 = merit(jet, u)
        slope = sigma * float(r @ step)
        rnorm = float(np.linalg.norm(r))
        t = 1.0
        accepted = False
        for _ in range(60):
            trial = u + t * step
            trial_jet = _try_jet(field, trial)
            if trial_jet is not None:
                f1 = merit(trial_jet, trial)
                armijo = f1 <= f0 + 1e-4 * t * min(slope, 0.0)
                decreased = np.linalg.norm(trial_jet.gradient - target) < rnorm
                if armijo or decreased:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            break
        stagnated = np.all(np.abs(trial - u) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(u)))
        u, jet = trial, trial_jet
        if stagnated:
            check_condition(jet.hessian, settings, field.provenance, tuple(u))
            return u, jet

    raise NewtonDivergence(
        f"{field.provenance}: gradient map inversion did not converge for target {tuple(target)}",
        tuple(target),
    )


def solve_pivot(
    func: Callable[[float], Tuple[float, float]],
    target: float,
    seed: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
    expected_sign: float = 0.0,
    where: str = "exchange",
) -> float:
    """Solve func(x) = target for a strictly monotone scalar function.

    func returns (value, derivative) and raises ThermoCheckError where x is not admissible.
    Damped Newton runs first; on failure a geometric bracket is built around the seed and
    handed to brentq.
    """
    first = _safe_eval(func, seed)
    if first is None:
        raise BracketFailure(f"{where}: pivot seed {seed} is not admissible", (seed,))
    x, (fx, dfx) = seed, first
    sign = expected_sign or float(np.sign(dfx))
    if dfx == 0.0 or np.sign(dfx) != sign:
        raise MonotonicityViolation(
            f"{where}: pivot derivative {dfx:.3e} at {x} does not have sign {sign:+.0f}", (x,)
        )

    def converged(value: float, der: float, at: float) -> bool:
        scale = max(abs(target), abs(der) * max(1.0, abs(at)))
        return abs(value - target) <= settings.tolerance * scale

    for _ in range(settings.max_iterations):
        if converged(fx, dfx, x):
            return x
        step = -(fx - target) / dfx
        t = 1.0
        moved = False
        for _ in range(40):
            trial = x + t * step
            out = _safe_eval(func, trial)
            if out is not None and abs(out[0] - target) < abs(fx - target):
                if out[1] == 0.0 or np.sign(out[1]) != sign:
                    raise MonotonicityViolation(
                        f"{where}: pivot derivative {out[1]:.3e} at {trial} does not have sign {sign:+.0f}",
                        (trial,),
                    )
                x, (fx, dfx) = trial, out
                moved = True
                break
            t *= 0.5
        if not moved:
            break
    if converged(fx, dfx, x):
        return x

    logger.debug(f"{where}: Newton stalled at {x}, falling back to bracketing")
    lo, hi = _bracket(func, target, x, fx, sign, settings, where)

    def residual(y: float) -> float:
        out = _safe_eval(func, y)
        if out is None:
            raise BracketFailure(f"{where}: bracket interior point {y} not admissible", (y,))
        return out[0] - target

    xtol = 1e-15 * max(1.0, abs(lo), abs(hi))
    root = brentq(residual, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    return float(root)


def _safe_eval(func, x: float):
    try:
        value, der = func(x)
    except ThermoCheckError:
        return None
    if not (np.isfinite(value) and np.isfinite(der)):
        return None
    return float(value), float(der)


def _bracket(func, target, x0, f0, sign, settings, where):
    # increasing in x when sign > 0: move up if below target
    direction = 1.0 if (f0 - target) * sign < 0 else -1.0
    step = settings.bracket_step * max(1.0, abs(x0))
    anchor = x0
    for _ in range(settings.max_expansions):
        trial = anchor + direction * step
        out = _safe_eval(func, trial)
        if out is None:
            step *= 0.5
            continue
        if (out[0] - target) * (f0 - target) <= 0:
            return (anchor, trial) if anchor < trial else (trial, anchor)
        anchor, f0 = trial, out[0]
        step *= 2.0
    raise BracketFailure(f"{where}: no sign change found for target {target}", (x0,))
