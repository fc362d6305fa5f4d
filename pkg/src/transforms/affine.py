"""
ThermoCheck Affine Transforms
psi(w) = c * phi(T w + b), sign flips, and the kinetic-energy extension
"""

import math
from typing import Optional, Sequence

import numpy as np

from src.core.errors import DimensionMismatch
from src.fields.scalar_field import DomainSpec, ScalarField
from src.transforms.base import TransformedField

# definiteness is only claimed for well-conditioned square maps
MAX_AFFINE_CONDITION = 1e12


def _linear_args(T: np.ndarray, b: np.ndarray, args):
    out = []
    for i in range(T.shape[0]):
        acc = args[0] * 0.0 + b[i]
        for j in range(T.shape[1]):
            if T[i, j] != 0.0:
                acc = args[j] * T[i, j] + acc
        out.append(acc)
    return out


def _mapped_box(field: ScalarField, T: np.ndarray, b: np.ndarray):
    n = T.shape[1]
    square_diagonal = T.shape[0] == n and np.count_nonzero(T - np.diag(np.diag(T))) == 0
    if not square_diagonal or np.any(np.diag(T) == 0.0):
        return (-math.inf,) * n, (math.inf,) * n
    lower, upper = [], []
    for i in range(n):
        ends = sorted(((field.domain.lower[i] - b[i]) / T[i, i], (field.domain.upper[i] - b[i]) / T[i, i]))
        lower.append(ends[0])
        upper.append(ends[1])
    return tuple(lower), tuple(upper)


def affine(
    field: ScalarField,
    T,
    b=None,
    factor: float = 1.0,
    require_invertible: bool = True,
    labels: Optional[Sequence[str]] = None,
    kind: str = "affine",
) -> TransformedField:
    """psi(w) = factor * phi(T w + b); T has shape (field.dimension, n)"""
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if T.shape[0] != field.dimension:
        raise DimensionMismatch(f"Affine matrix has {T.shape[0]} rows, field dimension is {field.dimension}")
    n = T.shape[1]
    b = np.zeros(field.dimension) if b is None else np.asarray(b, dtype=float).reshape(-1)
    if b.shape[0] != field.dimension:
        raise DimensionMismatch(f"Affine offset has length {b.shape[0]}, expected {field.dimension}")
    if factor == 0.0:
        raise ValueError("Affine function factor must be nonzero")
    invertible = T.shape[0] == n and np.linalg.cond(T) < MAX_AFFINE_CONDITION
    if require_invertible and not invertible:
        raise DimensionMismatch("Affine matrix must be square and invertible to preserve definiteness")

    def admissible(w: np.ndarray) -> bool:
        return field.contains(T @ w + b)

    def expression(args):
        return field.expr(_linear_args(T, b, args)) * factor

    def forward(x, parent_jet):
        if not invertible:
            raise DimensionMismatch("Affine forward map needs an invertible matrix")
        return np.linalg.solve(T, np.asarray(x, dtype=float) - b)

    lower, upper = _mapped_box(field, T, b)
    return TransformedField(
        parent=field,
        kind=kind,
        dimension=n,
        domain=DomainSpec(lower, upper, admissible, f"affine preimage of {field.provenance}"),
        expression=expression,
        forward_map=forward,
        labels=labels,
    )


def sign_flip(field: ScalarField, signs: Sequence[float], labels: Optional[Sequence[str]] = None) -> TransformedField:
    """psi(w) = phi(diag(signs) w) with every sign +1 or -1"""
    signs = np.asarray(signs, dtype=float)
    if signs.shape != (field.dimension,):
        raise DimensionMismatch(f"sign_flip needs {field.dimension} signs, got {signs.shape}")
    if not np.all(np.abs(signs) == 1.0):
        raise ValueError(f"Signs must be +1 or -1: {signs}")
    return affine(field, np.diag(signs), labels=labels, kind="sign_flip")


def flip_signs(dimension: int, index: int) -> np.ndarray:
    """Sign vector negating only variable `index` (1-based)"""
    signs = np.ones(dimension)
    signs[index - 1] = -1.0
    return signs


def add_kinetic(
    field: ScalarField,
    d: int,
    position: int = 1,
    velocity: Optional[Sequence[float]] = None,
    labels: Optional[Sequence[str]] = None,
) -> TransformedField:
    """psi(x) = phi(x without the velocity block) + |v|^2 / 2.

    Inserts d velocity variables before the 0-based `position` of the field's variables.
    The forward map appends `velocity` (zeros by default) to parent points.
    """
    if d < 1:
        raise DimensionMismatch("Kinetic extension needs at least one velocity component")
    m = field.dimension
    if not 0 <= position <= m:
        raise DimensionMismatch(f"Velocity block position {position} outside 0..{m}")
    vel = np.zeros(d) if velocity is None else np.asarray(velocity, dtype=float).reshape(-1)
    if vel.shape[0] != d:
        raise DimensionMismatch(f"Velocity has {vel.shape[0]} components, expected {d}")
    block = slice(position, position + d)

    def split(x):
        return list(x[:position]) + list(x[position + d:]), list(x[block])

    def admissible(x: np.ndarray) -> bool:
        inner, _ = split(x)
        return field.contains(np.array(inner))

    def expression(args):
        inner, v = split(list(args))
        kinetic = v[0] * v[0]
        for c in v[1:]:
            kinetic = kinetic + c * c
        return field.expr(inner) + kinetic * 0.5

    def forward(x, parent_jet):
        x = np.asarray(x, dtype=float)
        return np.concatenate([x[:position], vel, x[position:]])

    lower = field.domain.lower[:position] + (-math.inf,) * d + field.domain.lower[position:]
    upper = field.domain.upper[:position] + (math.inf,) * d + field.domain.upper[position:]
    if labels is None:
        names = [f"v{i + 1}" for i in range(d)]
        labels = field.labels[:position] + tuple(names) + field.labels[position:]
    return TransformedField(
        parent=field,
        kind="add_kinetic",
        dimension=m + d,
        domain=DomainSpec(lower, upper, admissible, f"kinetic extension of {field.provenance}"),
        expression=expression,
        forward_map=forward,
        labels=labels,
    )
