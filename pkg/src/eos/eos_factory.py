"""
ThermoCheck EOS Factory
Base class for equations of state and a factory selecting the family by name
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.core.errors import ConfigError
from src.fields.jet import JetLike
from src.fields.scalar_field import DomainSpec, ScalarField
from src.utils.logger import get_logger

VS_LABELS = ("v [m^3/kg]", "s [J/(kg K)]")
V_THETA_LABELS = ("v [m^3/kg]", "theta [K]")
RHO_THETA_LABELS = ("rho [kg/m^3]", "theta [K]")


@dataclass(frozen=True)
class ReferenceState:
    """Anchor state of the fundamental potential; also the default solver seed"""

    v: float
    s: float
    u: float
    theta: float
    p: float

    def to_dict(self) -> Dict[str, float]:
        return {"v": self.v, "s": self.s, "u": self.u, "theta": self.theta, "p": self.p}


class BaseEOS(ABC):
    """Abstract equation of state.

    Subclasses implement closed-form formulas that accept floats or Jets, so the same code
    gives closed-form values and exact derivatives. Fields are assembled here.
    """

    family: str = ""

    def __init__(self):
        self.logger = get_logger(__name__)

    # -- closed forms --

    @property
    @abstractmethod
    def reference(self) -> ReferenceState:
        pass

    @abstractmethod
    def energy_vs(self, v: JetLike, s: JetLike) -> JetLike:
        """Fundamental potential u(v,s)"""

    @abstractmethod
    def pressure_vs(self, v: JetLike, s: JetLike) -> JetLike:
        pass

    @abstractmethod
    def temperature_vs(self, v: JetLike, s: JetLike) -> JetLike:
        pass

    @abstractmethod
    def pressure_v_theta(self, v: JetLike, theta: JetLike) -> JetLike:
        """Thermal equation of state"""

    @abstractmethod
    def energy_v_theta(self, v: JetLike, theta: JetLike) -> JetLike:
        """Caloric equation of state"""

    @abstractmethod
    def entropy_v_theta(self, v: JetLike, theta: JetLike) -> JetLike:
        pass

    @abstractmethod
    def pressure_rho_e(self, rho: JetLike, e: JetLike) -> JetLike:
        """Pressure from density and specific internal energy"""

    @abstractmethod
    def volume_bounds(self):
        """Open interval of admissible specific volumes"""

    def admissible_vs(self, x: np.ndarray) -> bool:
        return True

    def admissible_v_theta(self, x: np.ndarray) -> bool:
        return True

    def condition_labels(self) -> Dict[str, str]:
        """Closed-form names for the energy stability conditions, where known"""
        return {}

    def params_dict(self) -> Dict[str, Any]:
        return {}

    # -- fields --

    def energy_field(self) -> ScalarField:
        lo, hi = self.volume_bounds()
        domain = DomainSpec((lo, -math.inf), (hi, math.inf), self._predicate(self.admissible_vs), "admissible (v,s)")
        return ScalarField(
            2, domain, lambda a: self.energy_vs(a[0], a[1]), f"{self.family} u(v,s)", VS_LABELS
        )

    def pressure_vs_field(self) -> ScalarField:
        field = self.energy_field()
        return ScalarField(
            2, field.domain, lambda a: self.pressure_vs(a[0], a[1]), f"{self.family} p(v,s)", VS_LABELS
        )

    def temperature_vs_field(self) -> ScalarField:
        field = self.energy_field()
        return ScalarField(
            2, field.domain, lambda a: self.temperature_vs(a[0], a[1]), f"{self.family} theta(v,s)", VS_LABELS
        )

    def _v_theta_domain(self, variables: str) -> DomainSpec:
        lo, hi = self.volume_bounds()
        if variables == "v_theta":
            return DomainSpec(
                (lo, 0.0), (hi, math.inf), self._predicate(self.admissible_v_theta), "admissible (v,theta)"
            )
        if variables == "rho_theta":
            rho_hi = math.inf if lo <= 0.0 else 1.0 / lo
            rho_lo = 0.0 if math.isinf(hi) else 1.0 / hi
            return DomainSpec(
                (rho_lo, 0.0),
                (rho_hi, math.inf),
                self._predicate(lambda x: self.admissible_v_theta(np.array([1.0 / x[0], x[1]]))),
                "admissible (rho,theta)",
            )
        raise ConfigError(f"Unknown measurable variable set: {variables}")

    def thermal_field(self, variables: str = "v_theta") -> ScalarField:
        domain = self._v_theta_domain(variables)
        if variables == "v_theta":
            return ScalarField(
                2, domain, lambda a: self.pressure_v_theta(a[0], a[1]), f"{self.family} p(v,theta)", V_THETA_LABELS
            )
        return ScalarField(
            2,
            domain,
            lambda a: self.pressure_v_theta(1.0 / a[0], a[1]),
            f"{self.family} p(rho,theta)",
            RHO_THETA_LABELS,
        )

    def caloric_field(self, variables: str = "v_theta") -> ScalarField:
        domain = self._v_theta_domain(variables)
        if variables == "v_theta":
            return ScalarField(
                2, domain, lambda a: self.energy_v_theta(a[0], a[1]), f"{self.family} u(v,theta)", V_THETA_LABELS
            )
        return ScalarField(
            2,
            domain,
            lambda a: self.energy_v_theta(1.0 / a[0], a[1]),
            f"{self.family} u(rho,theta)",
            RHO_THETA_LABELS,
        )

    # -- probe mapping --

    def vs_from_v_theta(self, v: float, theta: float) -> np.ndarray:
        return np.array([v, float(self.entropy_v_theta(v, theta))])

    def vu_from_vs(self, x: np.ndarray) -> np.ndarray:
        return np.array([x[0], float(self.energy_vs(x[0], x[1]))])

    def v_theta_from_vs(self, x: np.ndarray) -> np.ndarray:
        return np.array([x[0], float(self.temperature_vs(x[0], x[1]))])

    @staticmethod
    def _predicate(check):
        def predicate(x: np.ndarray) -> bool:
            with np.errstate(all="ignore"):
                try:
                    return bool(check(x))
                except (ValueError, ZeroDivisionError, OverflowError):
                    return False

        return predicate

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params_dict()})"


class EOSFactory:
    """Factory for creating equation-of-state instances"""

    @staticmethod
    def families() -> Dict[str, type]:
        from src.eos.ideal_gas import PolytropicGas
        from src.eos.tait import TaitLiquid
        from src.eos.van_der_waals import VanDerWaalsGas

        return {"polytropic": PolytropicGas, "vdw": VanDerWaalsGas, "tait": TaitLiquid}

    @staticmethod
    def create_eos(
        family: str, params: Dict[str, Any], reference: Optional[Dict[str, float]] = None
    ) -> BaseEOS:
        """Create an EOS instance by family name"""
        families = EOSFactory.families()
        if family not in families:
            raise ConfigError(f"Unsupported EOS family: {family} (known: {', '.join(sorted(families))})")
        try:
            return families[family].from_config(params, reference or {})
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid {family} parameters: {e}") from e
