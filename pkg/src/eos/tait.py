"""
ThermoCheck Tait Liquid
Fundamental form u(v,s) of a Tait-type compressible liquid with linear saturation slope D
"""

import math
from dataclasses import dataclass
from typing import Any, Dict

from src.core.errors import DomainViolation
from src.eos.eos_factory import BaseEOS, ReferenceState
from src.fields.jet import JetLike, log, power, sqrt
from src.fields.scalar_field import ScalarField
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TaitParams:
    """Reference constants plus the derived A = K_r - p_r, B = K_r v_r^nu, C = c_vr / theta_r.

    C <= 0 is accepted so that unstable fixtures can be built; it is logged.
    """

    nu: float
    v_r: float
    K_r: float
    p_r: float
    theta_r: float
    c_vr: float
    D: float
    s_r: float = 0.0
    u_r: float = 0.0

    def __post_init__(self):
        if self.nu < 1.0:
            raise ValueError(f"Tait exponent nu must be >= 1, got {self.nu}")
        if self.K_r <= 0 or self.v_r <= 0 or self.theta_r <= 0:
            raise ValueError(f"Tait needs K_r, v_r, theta_r > 0: {self}")
        if self.c_vr == 0.0:
            raise ValueError("Tait c_vr must be nonzero")
        if self.c_vr < 0.0:
            logger.warning(f"⚠️ Tait parameters with C = {self.C:.6g} <= 0 give a non-convex u(v,s)")

    @property
    def A(self) -> float:
        return self.K_r - self.p_r

    @property
    def B(self) -> float:
        return self.K_r * self.v_r**self.nu

    @property
    def C(self) -> float:
        return self.c_vr / self.theta_r


def tait_phi(params: TaitParams, v: JetLike) -> JetLike:
    """Phi(v) with Phi(v_r) = 0 and Phi'(v) = -v^(-nu)"""
    if params.nu == 1.0:
        return log(params.v_r / v)
    e = 1.0 - params.nu
    return (power(v, e) * -1.0 + params.v_r**e) * (1.0 / e)


def _check_volume(v: float):
    if v <= 0:
        raise DomainViolation(f"Tait formulas need v > 0, got {v}", (v,))


def tait_pressure(params: TaitParams, v: float, s: float) -> float:
    """p = -u_v(v,s)"""
    _check_volume(v)
    q = (s - params.s_r) - params.D * (v - params.v_r)
    return -params.A + params.B * v**-params.nu + params.D * (q / params.C + params.theta_r)


def tait_temperature(params: TaitParams, v: float, s: float) -> float:
    """theta = u_s(v,s)"""
    _check_volume(v)
    q = (s - params.s_r) - params.D * (v - params.v_r)
    return q / params.C + params.theta_r


class TaitLiquid(BaseEOS):
    """Tait liquid; admissible states have v > 0 and p > 0"""

    family = "tait"

    def __init__(self, params: TaitParams):
        super().__init__()
        self.params = params

    @classmethod
    def from_config(cls, params: Dict[str, Any], reference: Dict[str, float]) -> "TaitLiquid":
        # the reference state lives inside the Tait parameters
        return cls(TaitParams(**params))

    @property
    def reference(self) -> ReferenceState:
        p = self.params
        u0 = float(self.energy_vs(p.v_r, p.s_r))
        return ReferenceState(p.v_r, p.s_r, u0, p.theta_r, float(self.pressure_vs(p.v_r, p.s_r)))

    def volume_bounds(self):
        return 0.0, math.inf

    def _q(self, v, s):
        p = self.params
        return (s - p.s_r) - (v - p.v_r) * p.D

    def energy_vs(self, v: JetLike, s: JetLike) -> JetLike:
        p = self.params
        q = self._q(v, s)
        return (
            (v - p.v_r) * p.A
            + tait_phi(p, v) * p.B
            + q * q * (0.5 / p.C)
            + (q + p.C * p.theta_r) * p.theta_r
            + p.u_r
        )

    def pressure_vs(self, v, s):
        p = self.params
        return power(v, -p.nu) * p.B + self._q(v, s) * (p.D / p.C) + (p.D * p.theta_r - p.A)

    def temperature_vs(self, v, s):
        p = self.params
        return self._q(v, s) * (1.0 / p.C) + p.theta_r

    def pressure_v_theta(self, v, theta):
        p = self.params
        return power(v, -p.nu) * p.B + theta * p.D - p.A

    def saturation_form_pressure(self, v, theta):
        """p_r + D (theta - theta_r) + K_r ((v_r/v)^nu - 1); equals pressure_v_theta - D theta_r"""
        p = self.params
        return power(v * (1.0 / p.v_r), -p.nu) * p.K_r + (theta - p.theta_r) * p.D + (p.p_r - p.K_r)

    def energy_v_theta(self, v, theta):
        p = self.params
        return (v - p.v_r) * p.A + tait_phi(p, v) * p.B + (theta * theta + p.theta_r**2) * (0.5 * p.C) + p.u_r

    def entropy_v_theta(self, v, theta):
        p = self.params
        return (v - p.v_r) * p.D + (theta - p.theta_r) * p.C + p.s_r

    def pressure_rho_e(self, rho, e):
        p = self.params
        v = 1.0 / rho
        thermal = (e - (v - p.v_r) * p.A - tait_phi(p, v) * p.B - p.u_r) * (2.0 / p.C) - p.theta_r**2
        return self.pressure_v_theta(v, sqrt(thermal))

    def admissible_vs(self, x) -> bool:
        return x[0] > 0 and float(self.pressure_vs(x[0], x[1])) > 0

    def admissible_v_theta(self, x) -> bool:
        return x[0] > 0 and x[1] > 0 and float(self.pressure_v_theta(x[0], x[1])) > 0

    def condition_labels(self) -> Dict[str, str]:
        return {
            "U_VV": "U_VV = B Phi''(v) + D^2/C",
            "U_SS": "U_SS = 1/C",
            "det": "U_VV U_SS - U_VS^2 = B Phi''(v)/C",
        }

    def params_dict(self) -> Dict[str, Any]:
        p = self.params
        return {
            "nu": p.nu,
            "v_r": p.v_r,
            "K_r": p.K_r,
            "p_r": p.p_r,
            "theta_r": p.theta_r,
            "c_vr": p.c_vr,
            "D": p.D,
            "s_r": p.s_r,
            "u_r": p.u_r,
        }


def tait_u_of_vs(params: TaitParams) -> ScalarField:
    return TaitLiquid(params).energy_field()
