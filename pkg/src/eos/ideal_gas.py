"""
ThermoCheck Ideal Polytropic Gas
p = R rho theta, u = c_v theta, and the reference-anchored fundamental form u(v,s)
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from src.core.errors import DomainViolation
from src.eos.eos_factory import BaseEOS, ReferenceState
from src.fields.jet import JetLike, exp, log, power
from src.fields.scalar_field import ScalarField


@dataclass(frozen=True)
class IdealPolytropicParams:
    """Completed parameter set; build with from_any from exactly two values"""

    R: float
    c_v: float
    c_p: float
    gamma: float

    @classmethod
    def from_any(
        cls,
        R: Optional[float] = None,
        c_v: Optional[float] = None,
        c_p: Optional[float] = None,
        gamma: Optional[float] = None,
    ) -> "IdealPolytropicParams":
        given = {k: v for k, v in {"R": R, "c_v": c_v, "c_p": c_p, "gamma": gamma}.items() if v is not None}
        if len(given) != 2:
            raise ValueError(f"Exactly two of R, c_v, c_p, gamma must be given, got {sorted(given)}")
        if R is not None and gamma is not None:
            c_v = R / (gamma - 1.0)
            c_p = gamma * c_v
        elif R is not None and c_v is not None:
            c_p = c_v + R
            gamma = c_p / c_v
        elif R is not None and c_p is not None:
            c_v = c_p - R
            gamma = c_p / c_v
        elif c_v is not None and c_p is not None:
            R = c_p - c_v
            gamma = c_p / c_v
        elif c_v is not None and gamma is not None:
            c_p = gamma * c_v
            R = c_p - c_v
        else:
            c_v = c_p / gamma
            R = c_p - c_v
        params = cls(R=float(R), c_v=float(c_v), c_p=float(c_p), gamma=float(gamma))
        params.validate()
        return params

    def validate(self):
        if not (self.R > 0 and self.c_v > 0 and self.c_p > self.c_v and self.gamma > 1):
            raise ValueError(f"Polytropic parameters violate R>0, c_v>0, c_p>c_v, gamma>1: {self}")


def ideal_pressure(params: IdealPolytropicParams, rho: float, theta: float) -> float:
    """p = R rho theta"""
    if rho <= 0 or theta <= 0:
        raise DomainViolation(f"ideal_pressure needs rho > 0 and theta > 0, got ({rho}, {theta})", (rho, theta))
    return params.R * rho * theta


def polytropic_pressure(params: IdealPolytropicParams, rho: float, u: float) -> float:
    """p = (gamma - 1) rho u"""
    if rho <= 0 or u <= 0:
        raise DomainViolation(f"polytropic_pressure needs rho > 0 and u > 0, got ({rho}, {u})", (rho, u))
    return (params.gamma - 1.0) * rho * u


class PolytropicGas(BaseEOS):
    """Ideal polytropic gas anchored at a reference state (v0, s0, u0)"""

    family = "polytropic"

    def __init__(self, params: IdealPolytropicParams, v0: float = 1.0, s0: float = 0.0, u0: float = 1.0):
        super().__init__()
        if v0 <= 0 or u0 <= 0:
            raise ValueError(f"Reference state needs v0 > 0 and u0 > 0, got v0={v0}, u0={u0}")
        self.params = params
        self.v0, self.s0, self.u0 = float(v0), float(s0), float(u0)

    @classmethod
    def from_config(cls, params: Dict[str, Any], reference: Dict[str, float]) -> "PolytropicGas":
        completed = IdealPolytropicParams.from_any(**params)
        return cls(completed, reference.get("v", 1.0), reference.get("s", 0.0), reference.get("u", 1.0))

    @property
    def reference(self) -> ReferenceState:
        theta0 = self.u0 / self.params.c_v
        return ReferenceState(self.v0, self.s0, self.u0, theta0, (self.params.gamma - 1.0) * self.u0 / self.v0)

    def volume_bounds(self):
        return 0.0, math.inf

    def energy_vs(self, v: JetLike, s: JetLike) -> JetLike:
        p = self.params
        return power(v * (1.0 / self.v0), 1.0 - p.gamma) * exp((s - self.s0) * (1.0 / p.c_v)) * self.u0

    def pressure_vs(self, v, s):
        return self.energy_vs(v, s) * (self.params.gamma - 1.0) / v

    def temperature_vs(self, v, s):
        return self.energy_vs(v, s) * (1.0 / self.params.c_v)

    def pressure_v_theta(self, v, theta):
        return theta * self.params.R / v

    def energy_v_theta(self, v, theta):
        return theta * self.params.c_v

    def entropy_v_theta(self, v, theta):
        p = self.params
        return log(theta * (p.c_v / self.u0)) * p.c_v + log(v * (1.0 / self.v0)) * p.R + self.s0

    def pressure_rho_e(self, rho, e):
        return rho * e * (self.params.gamma - 1.0)

    def admissible_v_theta(self, x) -> bool:
        return x[1] > 0

    def sound_speed(self, rho: float, p: float) -> float:
        return math.sqrt(self.params.gamma * p / rho)

    def params_dict(self) -> Dict[str, Any]:
        p = self.params
        return {"R": p.R, "c_v": p.c_v, "c_p": p.c_p, "gamma": p.gamma}


def polytropic_u_of_vs(eos: PolytropicGas) -> ScalarField:
    """u(v,s) = u0 (v0/v)^(gamma-1) exp((s - s0)/c_v)"""
    return eos.energy_field()
