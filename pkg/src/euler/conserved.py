"""
ThermoCheck Conserved States
Conserved variables (rho, M, E) of the Euler system and maps from primitive states
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.core.errors import DimensionMismatch, DomainViolation
from src.eos.eos_factory import BaseEOS
from src.fields.jet import Jet


@dataclass(frozen=True)
class ConservedState:
    """Mass density, momentum density and total energy density; vacuum excluded"""

    rho: float
    momentum: Tuple[float, ...]
    energy: float

    def __post_init__(self):
        momentum = tuple(float(m) for m in self.momentum)
        if not 1 <= len(momentum) <= 3:
            raise DimensionMismatch(f"Momentum needs 1 to 3 components, got {len(momentum)}")
        object.__setattr__(self, "momentum", momentum)
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "energy", float(self.energy))
        if not self.rho > 0:
            raise DomainViolation(f"Conserved state needs rho > 0, got {self.rho}", self.as_tuple())
        if not self.internal_energy_density > 0:
            raise DomainViolation(
                f"Conserved state needs positive internal energy density, got {self.internal_energy_density}",
                self.as_tuple(),
            )

    @property
    def d(self) -> int:
        return len(self.momentum)

    @property
    def velocity(self) -> np.ndarray:
        return np.array(self.momentum) / self.rho

    @property
    def kinetic_energy_density(self) -> float:
        return float(np.dot(self.momentum, self.momentum)) / (2.0 * self.rho)

    @property
    def internal_energy_density(self) -> float:
        return self.energy - self.kinetic_energy_density

    @property
    def specific_internal_energy(self) -> float:
        return self.internal_energy_density / self.rho

    def as_tuple(self) -> Tuple[float, ...]:
        return (self.rho,) + self.momentum + (self.energy,)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.as_tuple())

    @classmethod
    def from_array(cls, u: Sequence[float]) -> "ConservedState":
        u = np.asarray(u, dtype=float).reshape(-1)
        if u.shape[0] < 3:
            raise DimensionMismatch(f"Conserved vector needs at least 3 entries, got {u.shape[0]}")
        return cls(u[0], tuple(u[1:-1]), u[-1])


def primitive_to_conserved(eos: BaseEOS, rho: float, velocity: Sequence[float], theta: float) -> ConservedState:
    """(rho, velocity, theta) -> (rho, rho velocity, rho (u + |velocity|^2 / 2))"""
    vel = np.asarray(velocity, dtype=float)
    e = float(eos.energy_v_theta(1.0 / rho, theta))
    return ConservedState(rho, tuple(rho * vel), rho * (e + 0.5 * float(vel @ vel)))


def primitive_to_density_coords(eos: BaseEOS, rho: float, velocity: Sequence[float], theta: float) -> np.ndarray:
    """(rho, velocity, theta) -> (rho, M, S_bar) with S_bar = rho s(1/rho, theta)"""
    vel = np.asarray(velocity, dtype=float)
    s = float(eos.entropy_v_theta(1.0 / rho, theta))
    return np.concatenate([[rho], rho * vel, [rho * s]])


def conserved_from_specific(eos: BaseEOS, v: float, velocity: Sequence[float], s: float) -> ConservedState:
    """(v, velocity, s) -> conserved state, via u(v,s)"""
    vel = np.asarray(velocity, dtype=float)
    rho = 1.0 / v
    e = float(eos.energy_vs(v, s))
    return ConservedState(rho, tuple(rho * vel), rho * (e + 0.5 * float(vel @ vel)))


def split_primitive(x: Sequence[float]) -> Tuple[float, np.ndarray, float]:
    """Sampler coordinates (rho, velocity..., theta) -> (rho, velocity, theta)"""
    x = np.asarray(x, dtype=float)
    return float(x[0]), x[1:-1], float(x[-1])


def primitive_jacobians(
    eos: BaseEOS, rho: float, velocity: Sequence[float], theta: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Jacobians of u = (rho, M, E) and of the main field w = ((g - |v|^2/2)/theta, v/theta, -1/theta)
    with respect to the primitive state (rho, velocity, theta), g = e + p/rho - theta s.
    """
    vel = np.asarray(velocity, dtype=float)
    n = vel.shape[0] + 2
    r = Jet.variable(rho, 0, n)
    speeds = [Jet.variable(float(c), i + 1, n) for i, c in enumerate(vel)]
    t = Jet.variable(theta, n - 1, n)
    v = 1.0 / r
    e = eos.energy_v_theta(v, t)
    kinetic = Jet.constant(0.0, n)
    for c in speeds:
        kinetic = kinetic + c * c * 0.5
    g = e + eos.pressure_v_theta(v, t) * v - t * eos.entropy_v_theta(v, t)
    inv_t = 1.0 / t
    u = [r] + [r * c for c in speeds] + [r * (e + kinetic)]
    w = [(g - kinetic) * inv_t] + [c * inv_t for c in speeds] + [-inv_t]
    return np.array([j.grad for j in u]), np.array([j.grad for j in w])
