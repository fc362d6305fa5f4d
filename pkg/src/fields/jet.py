"""
ThermoCheck Jet Arithmetic
Second-order truncated Taylor numbers: value, gradient and Hessian carried together
"""

from typing import Sequence, Union

import numpy as np

Number = Union[float, int]


class Jet:
    """Scalar with exact first and second derivatives w.r.t. n seeded variables.

    Arrays are never modified in place, so jets may share them safely.
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, value: float, n: int) -> "Jet":
        return cls(value, np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, value: float, index: int, n: int) -> "Jet":
        grad = np.zeros(n)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    def _unary(self, f0: float, f1: float, f2: float) -> "Jet":
        g = self.grad
        return Jet(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    # -- arithmetic --

    def __neg__(self) -> "Jet":
        return Jet(-self.value, -self.grad, -self.hess)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other: Union["Jet", Number]) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Jet(self.value + float(other), self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other: Union["Jet", Number]) -> "Jet":
        if isinstance(other, Jet):
            return Jet(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Jet(self.value - float(other), self.grad, self.hess)

    def __rsub__(self, other: Number) -> "Jet":
        return Jet(float(other) - self.value, -self.grad, -self.hess)

    def __mul__(self, other: Union["Jet", Number]) -> "Jet":
        if isinstance(other, Jet):
            cross = np.outer(self.grad, other.grad)
            return Jet(
                self.value * other.value,
                self.value * other.grad + other.value * self.grad,
                self.value * other.hess + other.value * self.hess + cross + cross.T,
            )
        c = float(other)
        return Jet(self.value * c, c * self.grad, c * self.hess)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        x = np.float64(self.value)
        inv = 1.0 / x
        return self._unary(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other: Union["Jet", Number]) -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.float64(other))

    def __rtruediv__(self, other: Number) -> "Jet":
        return self.reciprocal() * float(other)

    def __pow__(self, p: Union["Jet", Number]) -> "Jet":
        if isinstance(p, Jet):
            return exp(p * log(self))
        p = float(p)
        if p == 0.0:
            return Jet.constant(1.0, self.n)
        if p == 1.0:
            return self
        if p == 2.0:
            return self * self
        x = np.float64(self.value)
        return self._unary(
            np.power(x, p), p * np.power(x, p - 1.0), p * (p - 1.0) * np.power(x, p - 2.0)
        )

    def __rpow__(self, base: Number) -> "Jet":
        return exp(self * log(float(base)))

    def is_finite(self) -> bool:
        return bool(
            np.isfinite(self.value) and np.all(np.isfinite(self.grad)) and np.all(np.isfinite(self.hess))
        )

    def __repr__(self) -> str:
        return f"Jet(value={self.value!r}, n={self.n})"


JetLike = Union[Jet, float]


def value_of(x: JetLike) -> float:
    return x.value if isinstance(x, Jet) else float(x)


def exp(x: JetLike) -> JetLike:
    if isinstance(x, Jet):
        e = np.exp(np.float64(x.value))
        return x._unary(e, e, e)
    return float(np.exp(np.float64(x)))


def log(x: JetLike) -> JetLike:
    if isinstance(x, Jet):
        v = np.float64(x.value)
        return x._unary(np.log(v), 1.0 / v, -1.0 / (v * v))
    return float(np.log(np.float64(x)))


def sqrt(x: JetLike) -> JetLike:
    if isinstance(x, Jet):
        r = np.sqrt(np.float64(x.value))
        return x._unary(r, 0.5 / r, -0.25 / (r * r * r))
    return float(np.sqrt(np.float64(x)))


def power(x: JetLike, p: float) -> JetLike:
    if isinstance(x, Jet):
        return x**p
    return float(np.power(np.float64(x), p))


def compose_jet2(value: float, grad: np.ndarray, hess: np.ndarray, args: Sequence[Jet]) -> Jet:
    """Second-order chain rule: push (value, grad, hess) of an outer function through inner jets.

    grad and hess are derivatives of the outer function w.r.t. its own m variables,
    evaluated at the values carried by args.
    """
    G = np.array([a.grad for a in args])
    if G.size == 0:
        n = args[0].n if args else 0
        return Jet(value, np.zeros(n), np.zeros((n, n)))
    inner = np.tensordot(grad, np.array([a.hess for a in args]), axes=1)
    h = G.T @ hess @ G + inner
    return Jet(value, G.T @ grad, 0.5 * (h + h.T))
