"""
ThermoCheck Scalar Fields
Points, admissible domains and twice-differentiable scalar fields
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import DimensionMismatch, DomainViolation, NonFiniteError, ThermoCheckError
from src.fields.jet import Jet

# Points closer than this (relative to max(1, |bound|)) to a box edge are rejected
BOUNDARY_RTOL = 1e-9


def characteristic_scale(x: np.ndarray) -> np.ndarray:
    return np.maximum(1.0, np.abs(x))


def strictly_above(x: float, bound: float) -> bool:
    if bound == -math.inf:
        return True
    return x - bound > BOUNDARY_RTOL * max(1.0, abs(bound))


def strictly_below(x: float, bound: float) -> bool:
    if bound == math.inf:
        return True
    return bound - x > BOUNDARY_RTOL * max(1.0, abs(bound))


@dataclass(frozen=True)
class Point:
    """A state with labelled coordinates, e.g. labels ("v [m^3/kg]", "s [J/(kg K)]")"""

    coords: Tuple[float, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        labels = tuple(self.labels) or tuple(f"u{i + 1}" for i in range(len(coords)))
        if len(labels) != len(coords):
            raise DimensionMismatch(
                f"Point has {len(coords)} coordinates but {len(labels)} labels"
            )
        if not all(math.isfinite(c) for c in coords):
            raise NonFiniteError(f"Point coordinates must be finite: {coords}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", labels)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


PointLike = Union[Point, Sequence[float], np.ndarray]


def as_array(p: PointLike) -> np.ndarray:
    if isinstance(p, Point):
        return p.array
    return np.asarray(p, dtype=float).reshape(-1)


@dataclass(frozen=True)
class DomainSpec:
    """Open convex admissible set: a box intersected with a membership predicate"""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    predicate: Optional[Callable[[np.ndarray], bool]] = field(default=None, compare=False)
    description: str = ""

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper):
            raise DimensionMismatch("Domain box bounds differ in length")
        if any(not lo < hi for lo, hi in zip(lower, upper)):
            raise ValueError(f"Empty domain box: lower={lower}, upper={upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unbounded(
        cls,
        dimension: int,
        predicate: Optional[Callable[[np.ndarray], bool]] = None,
        description: str = "",
    ) -> "DomainSpec":
        return cls((-math.inf,) * dimension, (math.inf,) * dimension, predicate, description)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def in_box(self, x: np.ndarray) -> bool:
        if x.shape[0] != self.dimension or not np.all(np.isfinite(x)):
            return False
        return all(
            strictly_above(xi, lo) and strictly_below(xi, hi)
            for xi, lo, hi in zip(x, self.lower, self.upper)
        )

    def contains(self, x: PointLike) -> bool:
        x = as_array(x)
        if not self.in_box(x):
            return False
        return self.predicate is None or bool(self.predicate(x))

    def is_bounded(self) -> bool:
        return all(math.isfinite(v) for v in self.lower + self.upper)


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and symmetric Hessian at a point"""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def __post_init__(self):
        g = np.array(self.gradient, dtype=float).reshape(-1)
        h = np.array(self.hessian, dtype=float).reshape(g.shape[0], g.shape[0])
        # upper triangle is the source of truth
        h = np.triu(h) + np.triu(h, 1).T
        if not (math.isfinite(self.value) and np.all(np.isfinite(g)) and np.all(np.isfinite(h))):
            raise NonFiniteError("Jet2 entries must be finite")
        g.flags.writeable = False
        h.flags.writeable = False
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "gradient", g)
        object.__setattr__(self, "hessian", h)

    @classmethod
    def from_jet(cls, jet: Jet) -> "Jet2":
        return cls(jet.value, jet.grad, jet.hess)

    @property
    def dimension(self) -> int:
        return self.gradient.shape[0]


Expression = Callable[[Sequence[Jet]], Jet]


class ScalarField:
    """Evaluable map from an open convex domain in R^m to R.

    The expression receives one Jet per variable and must only use jet arithmetic,
    so calling it with seeded variables yields exact derivatives and calling it with
    jets from an outer transform composes derivatives by the chain rule.
    Implicit fields (solved by Newton) check only the box up front; their solver
    raises the precise error when a point is not admissible.
    """

    def __init__(
        self,
        dimension: int,
        domain: DomainSpec,
        expression: Expression,
        provenance: str,
        labels: Optional[Sequence[str]] = None,
        implicit: bool = False,
    ):
        if domain.dimension != dimension:
            raise DimensionMismatch(
                f"Domain dimension {domain.dimension} does not match field dimension {dimension}"
            )
        self.dimension = dimension
        self.domain = domain
        self._expression = expression
        self.provenance = provenance
        self.labels: Tuple[str, ...] = tuple(labels) if labels else tuple(
            f"u{i + 1}" for i in range(dimension)
        )
        self.implicit = implicit

    def __repr__(self) -> str:
        return f"ScalarField(m={self.dimension}, provenance={self.provenance!r})"

    def expr(self, args: Sequence[Jet]) -> Jet:
        """Raw expression without domain checks (used when composing fields)"""
        if len(args) != self.dimension:
            raise DimensionMismatch(f"{self.provenance}: expected {self.dimension} arguments")
        return self._expression(args)

    def contains(self, p: PointLike) -> bool:
        x = as_array(p)
        if x.shape[0] != self.dimension:
            return False
        if not self.implicit:
            return self.domain.contains(x)
        try:
            return self.domain.contains(x)
        except ThermoCheckError:
            return False

    def _check_admissible(self, x: np.ndarray):
        if x.shape[0] != self.dimension:
            raise DimensionMismatch(
                f"{self.provenance}: point of length {x.shape[0]} for field of dimension {self.dimension}"
            )
        admissible = self.domain.in_box(x) if self.implicit else self.domain.contains(x)
        if not admissible:
            raise DomainViolation(
                f"{self.provenance}: point {tuple(x)} outside domain {self.domain.description}",
                tuple(x),
            )

    def jet_at(self, p: PointLike, active: Optional[Iterable[int]] = None) -> Jet2:
        """Evaluate with derivatives w.r.t. the active variables (all by default)"""
        x = as_array(p)
        self._check_admissible(x)
        index = list(range(self.dimension)) if active is None else list(active)
        n = len(index)
        args: List[Jet] = [Jet.constant(xi, n) for xi in x]
        for k, i in enumerate(index):
            args[i] = Jet.variable(x[i], k, n)
        try:
            with np.errstate(all="ignore"):
                out = self._expression(args)
        except (ZeroDivisionError, OverflowError, ValueError) as e:
            raise NonFiniteError(f"{self.provenance}: {e} at {tuple(x)}", tuple(x)) from e
        if not isinstance(out, Jet):
            out = Jet.constant(float(out), n)
        if not out.is_finite():
            raise NonFiniteError(f"{self.provenance}: non-finite result at {tuple(x)}", tuple(x))
        return Jet2.from_jet(out)

    def value(self, p: PointLike) -> float:
        return self.jet_at(p, active=()).value


def evaluate_jet2(field: ScalarField, p: PointLike) -> Jet2:
    """Exact value, gradient and Hessian of field at p"""
    return field.jet_at(p)


def _steps(x: np.ndarray, h: Union[float, Sequence[float]]) -> np.ndarray:
    if np.isscalar(h):
        if h <= 0:
            raise ValueError("Finite-difference step must be positive")
        return float(h) * characteristic_scale(x)
    steps = np.asarray(h, dtype=float)
    if steps.shape != x.shape or np.any(steps <= 0):
        raise ValueError("Finite-difference steps must be positive, one per variable")
    return steps


def fd_gradient(field: ScalarField, p: PointLike, h: Union[float, Sequence[float]] = 1e-6) -> np.ndarray:
    """Central first differences"""
    x = as_array(p)
    steps = _steps(x, h)
    grad = np.empty(x.shape[0])
    for i, hi in enumerate(steps):
        e = np.zeros_like(x)
        e[i] = hi
        grad[i] = (field.value(x + e) - field.value(x - e)) / (2.0 * hi)
    return grad


def fd_hessian(field: ScalarField, p: PointLike, h: Union[float, Sequence[float]] = 1e-4) -> np.ndarray:
    """Central second differences; an oracle independent of jet arithmetic"""
    x = as_array(p)
    steps = _steps(x, h)
    m = x.shape[0]
    f0 = field.value(x)
    H = np.empty((m, m))
    for i in range(m):
        ei = np.zeros(m)
        ei[i] = steps[i]
        H[i, i] = (field.value(x + ei) - 2.0 * f0 + field.value(x - ei)) / steps[i] ** 2
        for j in range(i + 1, m):
            ej = np.zeros(m)
            ej[j] = steps[j]
            H[i, j] = (
                field.value(x + ei + ej)
                - field.value(x + ei - ej)
                - field.value(x - ei + ej)
                + field.value(x - ei - ej)
            ) / (4.0 * steps[i] * steps[j])
            H[j, i] = H[i, j]
    return H
