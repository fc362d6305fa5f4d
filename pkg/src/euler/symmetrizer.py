"""
ThermoCheck Symmetrizer
Main field, generating potentials and the symmetric form of the Euler system,
plus the alternative chain that builds the generating potential from e(v, v_bar, s)
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.convexity.definiteness import (
    DefinitenessClass,
    DefinitenessVerdict,
    classify_hessian,
    relative_asymmetry,
)
from src.eos.eos_factory import BaseEOS
from src.euler.conserved import ConservedState, conserved_from_specific, primitive_jacobians
from src.euler.densities import entropy_density_conserved
from src.euler.fluxes import entropy_flux_jet, euler_flux, flux_jacobian
from src.fields.scalar_field import PointLike, ScalarField, as_array
from src.transforms.affine import affine
from src.transforms.catalog import build_chain, default_velocity
from src.transforms.chain import ChainReport, run_chain
from src.transforms.legendre import legendre
from src.transforms.solvers import DEFAULT_SETTINGS, SolverSettings, check_condition
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)

SYMMETRY_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-8
CLOSED_FORM_TOLERANCE = 1e-7
GODUNOV_TOLERANCE = 1e-8
TINY = np.finfo(float).tiny


def _relative(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), TINY))


def convex_entropy_field(S_field: ScalarField) -> ScalarField:
    """Phi = -S_bar"""
    m = S_field.dimension
    return affine(S_field, np.eye(m), factor=-1.0, labels=S_field.labels)


def main_field_jacobian(eos: BaseEOS, rho: float, velocity: Sequence[float], theta: float) -> np.ndarray:
    """du/dw = (du/dq) (dw/dq)^-1 over the primitive state q, columns equilibrated before the solve"""
    U_q, W_q = primitive_jacobians(eos, rho, velocity, theta)
    scale = 1.0 / np.maximum(np.abs(W_q).max(axis=0), TINY)
    return np.linalg.solve((W_q * scale).T, (U_q * scale).T).T


def reference_conserved_state(eos: BaseEOS, d: int) -> np.ndarray:
    ref = eos.reference
    rho = 1.0 / ref.v
    return np.array([rho] + [0.0] * d + [rho * ref.u])


@dataclass(frozen=True)
class SymmetrizedSystem:
    """Snapshot of the symmetric form at one conserved state"""

    state: np.ndarray
    w: np.ndarray
    L: float
    L_flux: List[float]
    L_ww: np.ndarray
    L_ww_closed_form: np.ndarray
    L_flux_ww: List[np.ndarray]
    diagnostics: Dict[str, float]
    verdict: DefinitenessVerdict

    @property
    def passed(self) -> bool:
        d = self.diagnostics
        return (
            self.verdict.cls == DefinitenessClass.POSITIVE_DEFINITE
            and d["L_ww_closed_form_asymmetry"] <= CLOSED_FORM_TOLERANCE
            and d["L_flux_ww_asymmetry"] <= SYMMETRY_TOLERANCE
            and d["L_w_residual"] <= SYMMETRY_TOLERANCE
            and d["L_flux_w_residual"] <= SYMMETRY_TOLERANCE
            and d["inverse_identity"] <= CLOSED_FORM_TOLERANCE
            and d["L_ww_routes"] <= CLOSED_FORM_TOLERANCE
            and d["L_value_routes"] <= IDENTITY_TOLERANCE
        )

    def to_dict(self, matrices: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "state": self.state.tolist(),
            "w": self.w.tolist(),
            "L": self.L,
            "L_flux": list(self.L_flux),
            "diagnostics": dict(sorted(self.diagnostics.items())),
            "L_ww_class": self.verdict.cls.value,
            "L_ww_margin": self.verdict.margin,
            "passed": self.passed,
        }
        if matrices:
            data["L_ww"] = self.L_ww.tolist()
            data["L_flux_ww"] = [A.tolist() for A in self.L_flux_ww]
        return data


def build_symmetrizer(
    eos: BaseEOS,
    d: int,
    state: ConservedState,
    entropy: Optional[ScalarField] = None,
    potential: Optional[ScalarField] = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SymmetrizedSystem:
    """w = Phi_u, L = w.u - Phi and L^i = w.f^i - Psi^i at one state.

    L_ww is computed as inv(Phi_uu) and, independently, as the closed-form Jacobian du/dw
    of the primitive maps; the latter is not symmetric by construction, so its asymmetry
    and its product with Phi_uu are checked too. The Legendre transform of Phi, solved from
    the reference state, must return u as its gradient and L as its value.
    Raises SingularHessian when Phi_uu is too badly conditioned to invert.
    """
    S_field = entropy if entropy is not None else entropy_density_conserved(eos, d, settings=settings)
    u = state.array
    jet = S_field.jet_at(u)
    phi, w, phi_uu = -jet.value, -np.asarray(jet.gradient), -np.asarray(jet.hessian)
    check_condition(phi_uu, settings, "Phi_uu", tuple(u))

    L = float(w @ u) - phi
    L_ww = np.linalg.inv(phi_uu)
    L_ww = 0.5 * (L_ww + L_ww.T)

    if potential is None:
        potential = legendre(convex_entropy_field(S_field), reference_conserved_state(eos, d), settings)
    L_jet = potential.jet_at(w)
    rho, velocity, theta = state.rho, state.velocity, -1.0 / float(w[-1])
    closed_form = main_field_jacobian(eos, rho, velocity, theta)

    L_flux, L_flux_ww, flux_w_residual, flux_ww_asymmetry = [], [], 0.0, 0.0
    for i in range(1, d + 1):
        f = euler_flux(state, eos, i)
        A = flux_jacobian(state, eos, i)
        psi, psi_u = entropy_flux_jet(jet, u, i)
        L_flux.append(float(w @ f) - psi)
        gradient_gap = L_ww @ (A.T @ w - psi_u)
        flux_w_residual = max(flux_w_residual, float(np.linalg.norm(gradient_gap) / max(np.linalg.norm(f), TINY)))
        B = A @ L_ww
        L_flux_ww.append(B)
        flux_ww_asymmetry = max(flux_ww_asymmetry, relative_asymmetry(B))

    diagnostics = {
        "L_w_residual": _relative(L_jet.gradient, u),
        "L_value_routes": abs(L_jet.value - L) / max(abs(L), abs(float(w @ u)), TINY),
        "L_ww_routes": _relative(closed_form, L_ww),
        "L_ww_closed_form_asymmetry": relative_asymmetry(closed_form),
        "L_flux_w_residual": flux_w_residual,
        "L_flux_ww_asymmetry": flux_ww_asymmetry,
        "inverse_identity": float(np.linalg.norm(closed_form @ phi_uu - np.eye(u.shape[0]))),
    }
    return SymmetrizedSystem(
        state=u,
        w=w,
        L=L,
        L_flux=L_flux,
        L_ww=L_ww,
        L_ww_closed_form=closed_form,
        L_flux_ww=L_flux_ww,
        diagnostics=diagnostics,
        verdict=classify_hessian(L_ww),
    )


@dataclass
class SymmetrizerSweep:
    systems: List[SymmetrizedSystem]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.systems)

    @property
    def worst(self) -> Dict[str, float]:
        keys = self.systems[0].diagnostics.keys() if self.systems else []
        return {k: max(s.diagnostics[k] for s in self.systems) for k in sorted(keys)}

    @property
    def uniform_bound(self) -> float:
        """Smallest eigenvalue of L_ww seen over all states"""
        return min((s.verdict.min_eig for s in self.systems), default=float("nan"))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state_count": len(self.systems),
            "passed": self.passed,
            "worst": self.worst,
            "uniform_bound": self.uniform_bound,
            "failures": [i for i, s in enumerate(self.systems) if not s.passed],
        }


def symmetrizer_sweep(
    eos: BaseEOS, d: int, states: Sequence[ConservedState], threads: int = 1, settings: SolverSettings = DEFAULT_SETTINGS
) -> SymmetrizerSweep:
    S_field = entropy_density_conserved(eos, d, settings=settings)
    potential = legendre(convex_entropy_field(S_field), reference_conserved_state(eos, d), settings)
    systems = ordered_map(lambda s: build_symmetrizer(eos, d, s, S_field, potential, settings), states, threads)
    sweep = SymmetrizerSweep(systems)
    status = "✅" if sweep.passed else "❌"
    logger.info(f"{status} symmetric form at {len(systems)} states, worst diagnostics {sweep.worst}")
    return sweep


@dataclass
class GodunovReport:
    """The chain-built generating potential against w.u - Phi at the same states"""

    chain: ChainReport
    value_residuals: List[float]
    main_field_residuals: List[float]
    theta_slot_residuals: List[float]
    tolerance: float = GODUNOV_TOLERANCE
    states: List[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.chain.passed
            and max(self.value_residuals, default=0.0) <= self.tolerance
            and max(self.main_field_residuals, default=0.0) <= self.tolerance
            and max(self.theta_slot_residuals, default=0.0) <= self.tolerance
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chain": self.chain.to_dict(),
            "worst_value_residual": max(self.value_residuals, default=0.0),
            "worst_main_field_residual": max(self.main_field_residuals, default=0.0),
            "worst_theta_slot_residual": max(self.theta_slot_residuals, default=0.0),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def godunov_chain(
    eos: BaseEOS,
    d: int,
    probes: Sequence[PointLike],
    velocity: Optional[Sequence[float]] = None,
    threads: int = 1,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> GodunovReport:
    """Run the chain u(v,s) -> ... -> L(-L_hat/theta, v_bar/theta, -1/theta) at (v,s) probes.

    The final variables coincide with the main field w = -grad S_bar, and the final value
    with L = w.u - Phi; both are compared at the conserved state of each probe.
    """
    vel = np.asarray(default_velocity(d) if velocity is None else velocity, dtype=float)
    chain = build_chain("godunov", eos, d, vel)
    report = run_chain(chain, eos.energy_field(), probes, threads)
    S_field = entropy_density_conserved(eos, d, settings=settings)
    temperature = eos.temperature_vs_field()

    def compare(index: int):
        x = as_array(probes[index])
        state = conserved_from_specific(eos, x[0], vel, x[1])
        u = state.array
        jet = S_field.jet_at(u)
        w = -np.asarray(jet.gradient)
        L = float(w @ u) + jet.value
        w_chain = np.asarray(report.stages[-1].probes[index])
        L_chain = report.jets[-1][index].value
        theta = temperature.value(x)
        return (
            abs(L_chain - L) / max(abs(L), abs(float(w @ u)), TINY),
            _relative(w_chain, w),
            abs(w_chain[-1] + 1.0 / theta) * theta,
            tuple(float(c) for c in u),
        )

    rows = ordered_map(compare, range(len(probes)), threads)
    godunov = GodunovReport(
        report,
        [r[0] for r in rows],
        [r[1] for r in rows],
        [r[2] for r in rows],
        states=[r[3] for r in rows],
    )
    status = "✅" if godunov.passed else "❌"
    logger.info(
        f"{status} Godunov chain against the Legendre potential: worst value residual "
        f"{max(godunov.value_residuals, default=0.0):.3e}"
    )
    return godunov
