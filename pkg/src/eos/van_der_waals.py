"""
ThermoCheck van der Waals Gas
p = R theta/(v - b) - a/v^2, u = -a/v + c_v theta, with constant c_v
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy.optimize import fsolve

from src.core.errors import DomainViolation, NewtonDivergence
from src.eos.eos_factory import BaseEOS, ReferenceState
from src.fields.jet import JetLike, exp, log, power


@dataclass(frozen=True)
class VanDerWaalsParams:
    """a = b = 0 is accepted and reduces to the ideal gas"""

    a: float
    b: float
    R: float
    c_v: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or self.R <= 0 or self.c_v <= 0:
            raise ValueError(f"van der Waals parameters need a, b >= 0 and R, c_v > 0: {self}")


def vdw_pressure(params: VanDerWaalsParams, v: float, theta: float) -> float:
    if v <= params.b:
        raise DomainViolation(f"vdw_pressure needs v > b, got v={v}, b={params.b}", (v, theta))
    if theta <= 0:
        raise DomainViolation(f"vdw_pressure needs theta > 0, got {theta}", (v, theta))
    return params.R * theta / (v - params.b) - params.a / (v * v)


def vdw_internal_energy(params: VanDerWaalsParams, v: float, theta: float) -> float:
    if v <= params.b or theta <= 0:
        raise DomainViolation(f"vdw_internal_energy needs v > b and theta > 0, got ({v}, {theta})", (v, theta))
    return -params.a / v + params.c_v * theta


class VanDerWaalsGas(BaseEOS):
    """van der Waals gas anchored at (v0, s0, theta0)"""

    family = "vdw"

    def __init__(self, params: VanDerWaalsParams, v0: float = 1.0, s0: float = 0.0, theta0: float = 1.0):
        super().__init__()
        if v0 <= params.b or theta0 <= 0:
            raise ValueError(f"Reference state needs v0 > b and theta0 > 0, got v0={v0}, theta0={theta0}")
        self.params = params
        self.v0, self.s0, self.theta0 = float(v0), float(s0), float(theta0)

    @classmethod
    def from_config(cls, params: Dict[str, Any], reference: Dict[str, float]) -> "VanDerWaalsGas":
        return cls(
            VanDerWaalsParams(**params),
            reference.get("v", 1.0),
            reference.get("s", 0.0),
            reference.get("theta", 1.0),
        )

    @property
    def reference(self) -> ReferenceState:
        u0 = float(self.energy_v_theta(self.v0, self.theta0))
        p0 = float(self.pressure_v_theta(self.v0, self.theta0))
        return ReferenceState(self.v0, self.s0, u0, self.theta0, p0)

    def volume_bounds(self):
        return self.params.b, math.inf

    def temperature_vs(self, v: JetLike, s: JetLike) -> JetLike:
        p = self.params
        ratio = power((v - p.b) * (1.0 / (self.v0 - p.b)), -p.R / p.c_v)
        return exp((s - self.s0) * (1.0 / p.c_v)) * ratio * self.theta0

    def energy_vs(self, v, s):
        return self.temperature_vs(v, s) * self.params.c_v - self.params.a / v

    def pressure_vs(self, v, s):
        p = self.params
        return self.temperature_vs(v, s) * p.R / (v - p.b) - p.a / (v * v)

    def pressure_v_theta(self, v, theta):
        p = self.params
        return theta * p.R / (v - p.b) - p.a / (v * v)

    def energy_v_theta(self, v, theta):
        return theta * self.params.c_v - self.params.a / v

    def entropy_v_theta(self, v, theta):
        p = self.params
        return (
            log(theta * (1.0 / self.theta0)) * p.c_v
            + log((v - p.b) * (1.0 / (self.v0 - p.b))) * p.R
            + self.s0
        )

    def pressure_rho_e(self, rho, e):
        p = self.params
        theta = (e + rho * p.a) * (1.0 / p.c_v)
        return theta * p.R / (1.0 / rho - p.b) - rho * rho * p.a

    def admissible_v_theta(self, x) -> bool:
        return x[1] > 0

    def critical_temperature(self) -> float:
        p = self.params
        return 8.0 * p.a / (27.0 * p.R * p.b)

    def params_dict(self) -> Dict[str, Any]:
        p = self.params
        return {"a": p.a, "b": p.b, "R": p.R, "c_v": p.c_v}


def vdw_critical_point(eos: VanDerWaalsGas) -> Tuple[float, float, float]:
    """Solve p_v = 0 and p_vv = 0 numerically; returns (v_c, theta_c, p_c).

    Unknowns are scaled as (v/b, theta R b / a) and the residuals come from jets of p(v,theta).
    """
    p = eos.params
    if p.a <= 0 or p.b <= 0:
        raise DomainViolation("Critical point needs a > 0 and b > 0")
    thermal = eos.thermal_field("v_theta")
    theta_unit = p.a / (p.R * p.b)

    def residual(z):
        v, theta = z[0] * p.b, z[1] * theta_unit
        try:
            jet = thermal.jet_at(np.array([v, theta]), active=(0,))
        except DomainViolation:
            return [1e6, 1e6]
        return [jet.gradient[0] * p.b**3 / p.a, jet.hessian[0, 0] * p.b**4 / p.a]

    z, info, ier, message = fsolve(residual, [2.5, 0.25], full_output=True, xtol=1e-14)
    if ier != 1:
        raise NewtonDivergence(f"Critical point solve failed: {message}")
    v_c, theta_c = float(z[0] * p.b), float(z[1] * theta_unit)
    return v_c, theta_c, float(eos.pressure_v_theta(v_c, theta_c))
