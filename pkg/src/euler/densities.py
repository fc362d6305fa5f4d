"""
ThermoCheck Euler Densities
Energy and entropy densities in conserved variables, built by transform chains from u(v,s)
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import DomainViolation
from src.eos.eos_factory import BaseEOS
from src.fields.scalar_field import DomainSpec, PointLike, ScalarField, as_array
from src.transforms.affine import add_kinetic
from src.transforms.base import TransformedField
from src.transforms.exchange import exchange
from src.transforms.reciprocal import reciprocal
from src.transforms.solvers import DEFAULT_SETTINGS, SolverSettings
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)

ROUTE_TOLERANCE = 1e-9
TINY = np.finfo(float).tiny


def _labels(d: int, last: str, middle: str = "M") -> List[str]:
    return ["rho"] + [f"{middle}{i + 1}" for i in range(d)] + [last]


def _homogeneous_seed(eos: BaseEOS):
    # pivots are densities rho*s, so scale the specific reference entropy by rho
    s_ref = eos.reference.s

    def seed(w: np.ndarray) -> float:
        return s_ref * w[0]

    return seed


def energy_density_field(eos: BaseEOS, d: int) -> TransformedField:
    """E_bar(rho, M, S_bar) = rho e(1/rho, M/rho, S_bar/rho), variables ordered (rho, M, S_bar)"""
    specific = add_kinetic(eos.energy_field(), d, position=1)
    return reciprocal(specific, 1, 1.0, labels=_labels(d, "S_bar"))


def internal_energy_density_field(eos: BaseEOS) -> TransformedField:
    """U_bar(rho, S_bar) = rho u(1/rho, S_bar/rho)"""
    return reciprocal(eos.energy_field(), 1, 1.0, labels=("rho", "S_bar"))


def entropy_density_of_internal(eos: BaseEOS, settings: SolverSettings = DEFAULT_SETTINGS) -> TransformedField:
    """S_bar(rho, U_bar) by exchanging U_bar with S_bar"""
    return exchange(
        internal_energy_density_field(eos), 2, _homogeneous_seed(eos), settings, 1.0, labels=("rho", "U_bar")
    )


def entropy_density_conserved(
    eos: BaseEOS, d: int, route: str = "exchange", settings: SolverSettings = DEFAULT_SETTINGS
) -> TransformedField:
    """S_bar(rho, M, E) along one of two constructions.

    "exchange": exchange E_bar and S_bar in the energy density.
    "reciprocal": exchange e and s in e(v, v_bar, s), then the reciprocal involution.
    """
    m = d + 2
    labels = _labels(d, "E")
    if route == "exchange":
        return exchange(energy_density_field(eos, d), m, _homogeneous_seed(eos), settings, 1.0, labels=labels)
    if route == "reciprocal":
        specific = add_kinetic(eos.energy_field(), d, position=1)
        s_of_e = exchange(specific, m, eos.reference.s, settings, 1.0)
        return reciprocal(s_of_e, 1, 1.0, labels=labels)
    raise ValueError(f"Unknown entropy density route: {route}")


@dataclass
class RouteComparison:
    states: List[tuple]
    value: List[float]
    gradient: List[float]
    hessian: List[float]
    tolerance: float = ROUTE_TOLERANCE

    @property
    def worst(self) -> Dict[str, float]:
        return {
            "value": max(self.value, default=0.0),
            "gradient": max(self.gradient, default=0.0),
            "hessian": max(self.hessian, default=0.0),
        }

    @property
    def passed(self) -> bool:
        return all(v <= self.tolerance for v in self.worst.values())

    def to_dict(self) -> Dict[str, Any]:
        return {"state_count": len(self.states), "worst": self.worst, "tolerance": self.tolerance, "passed": self.passed}


def _relative(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), TINY))


def compare_entropy_routes(
    eos: BaseEOS,
    d: int,
    states: Sequence[PointLike],
    threads: int = 1,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> RouteComparison:
    """Jets of both S_bar constructions at conserved states (rho, M, E)"""
    by_exchange = entropy_density_conserved(eos, d, "exchange", settings)
    by_reciprocal = entropy_density_conserved(eos, d, "reciprocal", settings)
    points = [as_array(s) for s in states]

    def compare(x):
        a, b = by_exchange.jet_at(x), by_reciprocal.jet_at(x)
        return _relative(a.value, b.value), _relative(a.gradient, b.gradient), _relative(a.hessian, b.hessian)

    rows = ordered_map(compare, points, threads)
    report = RouteComparison(
        [tuple(float(c) for c in x) for x in points],
        [r[0] for r in rows],
        [r[1] for r in rows],
        [r[2] for r in rows],
    )
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} entropy density routes agree to {report.worst} at {len(points)} states")
    return report


# -- kinetic energy density --


def kinetic_density_field(d: int) -> ScalarField:
    """E_kin(rho, M) = |M|^2 / (2 rho)"""

    def expression(args):
        rho, momentum = args[0], args[1:]
        total = momentum[0] * momentum[0]
        for m in momentum[1:]:
            total = total + m * m
        return total / rho * 0.5

    domain = DomainSpec((0.0,) + (-math.inf,) * d, (math.inf,) * (d + 1), description="rho > 0")
    return ScalarField(d + 1, domain, expression, f"kinetic density (d={d})", _labels(d, "")[:-1])


@dataclass(frozen=True)
class KineticHessian:
    """Closed-form Hessian of the kinetic density and its R diag R^T factorization"""

    matrix: np.ndarray
    triangular: np.ndarray
    diagonal: np.ndarray
    residual: float


def kinetic_density_hessian(rho: float, momentum: Sequence[float]) -> KineticHessian:
    """Entries |M|^2/rho^3, -M_i/rho^2 and delta_ij/rho.

    The factor R is unit upper triangular with first row (1, -M/rho) and the diagonal is
    (0, 1/rho, ...), so the matrix is positive semi-definite with exactly one zero eigenvalue.
    """
    if rho <= 0:
        raise DomainViolation(f"Kinetic density needs rho > 0, got {rho}", (rho,))
    M = np.asarray(momentum, dtype=float)
    n = M.shape[0] + 1
    H = np.empty((n, n))
    H[0, 0] = float(M @ M) / rho**3
    H[0, 1:] = -M / rho**2
    H[1:, 0] = -M / rho**2
    H[1:, 1:] = np.eye(n - 1) / rho
    R = np.eye(n)
    R[0, 1:] = -M / rho
    D = np.diag([0.0] + [1.0 / rho] * (n - 1))
    rebuilt = R @ D @ R.T
    residual = float(np.linalg.norm(rebuilt - H) / max(np.linalg.norm(H), TINY))
    return KineticHessian(H, R, D, residual)


def kinetic_hyperplane_residual(u1: Sequence[float], u2: Sequence[float]):
    """Supporting-hyperplane gap of E_kin at u2 evaluated at u1, and its closed form
    (1 / (2 rho_1)) |M_1 - (rho_1 / rho_2) M_2|^2"""
    u1, u2 = np.asarray(u1, dtype=float), np.asarray(u2, dtype=float)
    d = u1.shape[0] - 1
    field = kinetic_density_field(d)
    j1, j2 = field.jet_at(u1, active=()), field.jet_at(u2)
    gap = j1.value - j2.value - float(j2.gradient @ (u1 - u2))
    diff = u1[1:] - (u1[0] / u2[0]) * u2[1:]
    closed = float(diff @ diff) / (2.0 * u1[0])
    return gap, closed


# -- relative energy --


def relative_energy(
    eos: Optional[BaseEOS],
    d: int,
    u1: PointLike,
    u2: PointLike,
    energy_field: Optional[ScalarField] = None,
) -> float:
    """Bregman distance E(u1) - E(u2) - E_u(u2).(u1 - u2) in (rho, M, S_bar) coordinates"""
    field = energy_field if energy_field is not None else energy_density_field(eos, d)
    x1, x2 = as_array(u1), as_array(u2)
    j1 = field.jet_at(x1, active=())
    j2 = field.jet_at(x2)
    return j1.value - j2.value - float(j2.gradient @ (x1 - x2))
