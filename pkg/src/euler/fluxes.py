"""
ThermoCheck Euler Fluxes
Compressible Euler fluxes, their jet Jacobians and the entropy-pair consistency check
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import DimensionMismatch, NonFiniteError
from src.eos.eos_factory import BaseEOS
from src.euler.conserved import ConservedState
from src.euler.densities import entropy_density_conserved
from src.fields.jet import Jet, JetLike
from src.fields.scalar_field import PointLike, ScalarField, as_array
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)

CONSISTENCY_TOLERANCE = 1e-9
TINY = np.finfo(float).tiny


def flux_components(eos: BaseEOS, args: Sequence[JetLike], i: int) -> List[JetLike]:
    """f^i = (M_i, M_i M / rho + p e_i, (E + p) M_i / rho) for direction i (1-based)"""
    d = len(args) - 2
    if not 1 <= i <= d:
        raise DimensionMismatch(f"Flux direction {i} outside 1..{d}")
    rho, momentum, energy = args[0], list(args[1:-1]), args[-1]
    kinetic = momentum[0] * momentum[0]
    for m in momentum[1:]:
        kinetic = kinetic + m * m
    e = (energy - kinetic * 0.5 / rho) / rho
    p = eos.pressure_rho_e(rho, e)
    vi = momentum[i - 1] / rho
    out = [momentum[i - 1]]
    for j, m in enumerate(momentum, start=1):
        component = m * vi
        out.append(component + p if j == i else component)
    out.append((energy + p) * vi)
    return out


def euler_flux(state: ConservedState, eos: BaseEOS, i: int) -> np.ndarray:
    values = flux_components(eos, list(state.as_tuple()), i)
    return np.array([float(v) for v in values])


def flux_jacobian(state: ConservedState, eos: BaseEOS, i: int) -> np.ndarray:
    """A^i = d f^i / d u by jet differentiation of each component"""
    x = state.array
    n = x.shape[0]
    args = [Jet.variable(xi, k, n) for k, xi in enumerate(x)]
    with np.errstate(all="ignore"):
        rows = flux_components(eos, args, i)
    A = np.array([r.grad if isinstance(r, Jet) else np.zeros(n) for r in rows])
    if not np.all(np.isfinite(A)):
        raise NonFiniteError(f"Non-finite flux Jacobian at {state.as_tuple()}", state.as_tuple())
    return A


def entropy_flux_jet(entropy_jet, x: np.ndarray, i: int, factor: float = 1.0):
    """Value and gradient of Psi^i = -factor (M_i / rho) S_bar from the jet of S_bar"""
    rho, mi = x[0], x[i]
    vi = mi / rho
    d_vi = np.zeros(x.shape[0])
    d_vi[0] = -mi / rho**2
    d_vi[i] = 1.0 / rho
    value = -factor * vi * entropy_jet.value
    grad = -factor * (d_vi * entropy_jet.value + vi * entropy_jet.gradient)
    return value, grad


@dataclass
class ConsistencyReport:
    """Residuals of (Psi^i_u)^T = Phi_u^T A^i per state and direction"""

    states: List[tuple]
    residuals: List[List[float]]
    tolerance: float = CONSISTENCY_TOLERANCE
    factor: float = 1.0

    @property
    def worst(self) -> float:
        return max((max(r) for r in self.residuals), default=0.0)

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state_count": len(self.states),
            "worst": self.worst,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def entropy_pair_consistency(
    eos: BaseEOS,
    d: int,
    states: Sequence[PointLike],
    threads: int = 1,
    entropy: Optional[ScalarField] = None,
    flux_factor: float = 1.0,
) -> ConsistencyReport:
    """Check that Psi^i = v_i Phi with Phi = -S_bar is an entropy flux for every direction.

    flux_factor scales the candidate entropy flux; anything but 1 should fail.
    """
    S_field = entropy if entropy is not None else entropy_density_conserved(eos, d)
    points = [as_array(s) for s in states]

    def residuals(x: np.ndarray) -> List[float]:
        state = ConservedState.from_array(x)
        jet = S_field.jet_at(x)
        phi_u = -np.asarray(jet.gradient)
        out = []
        for i in range(1, d + 1):
            _, psi_u = entropy_flux_jet(jet, x, i, flux_factor)
            rhs = flux_jacobian(state, eos, i).T @ phi_u
            out.append(float(np.linalg.norm(psi_u - rhs) / max(np.linalg.norm(rhs), TINY)))
        return out

    report = ConsistencyReport(
        [tuple(float(c) for c in x) for x in points], ordered_map(residuals, points, threads), factor=flux_factor
    )
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} entropy pair consistency: worst residual {report.worst:.3e} over {len(points)} states")
    return report
