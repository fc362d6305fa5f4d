"""
ThermoCheck Definiteness Classification
Eigenvalue-based Hessian classification with a relative zero band
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import eigvalsh

from src.core.errors import AsymmetryTooLarge, NonFiniteError

ZERO_BAND_RTOL = 1e-9
ASYMMETRY_RTOL = 1e-8
DEFAULT_SCALE_FLOOR = np.finfo(float).tiny


class DefinitenessClass(str, Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMI_DEFINITE = "PositiveSemiDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    NEGATIVE_SEMI_DEFINITE = "NegativeSemiDefinite"
    INDEFINITE = "Indefinite"

    def mirrored(self) -> "DefinitenessClass":
        return _MIRROR[self]

    @property
    def is_definite(self) -> bool:
        return self in (DefinitenessClass.POSITIVE_DEFINITE, DefinitenessClass.NEGATIVE_DEFINITE)


_MIRROR = {
    DefinitenessClass.POSITIVE_DEFINITE: DefinitenessClass.NEGATIVE_DEFINITE,
    DefinitenessClass.NEGATIVE_DEFINITE: DefinitenessClass.POSITIVE_DEFINITE,
    DefinitenessClass.POSITIVE_SEMI_DEFINITE: DefinitenessClass.NEGATIVE_SEMI_DEFINITE,
    DefinitenessClass.NEGATIVE_SEMI_DEFINITE: DefinitenessClass.POSITIVE_SEMI_DEFINITE,
    DefinitenessClass.INDEFINITE: DefinitenessClass.INDEFINITE,
}

# expectation vocabulary used by chains and sweeps
ACCEPTED_CLASSES = {
    "positive_definite": {DefinitenessClass.POSITIVE_DEFINITE},
    "negative_definite": {DefinitenessClass.NEGATIVE_DEFINITE},
    "convex": {DefinitenessClass.POSITIVE_DEFINITE, DefinitenessClass.POSITIVE_SEMI_DEFINITE},
    "concave": {DefinitenessClass.NEGATIVE_DEFINITE, DefinitenessClass.NEGATIVE_SEMI_DEFINITE},
    "any": set(DefinitenessClass),
}


def matches_expectation(cls: DefinitenessClass, expect: str) -> bool:
    if expect not in ACCEPTED_CLASSES:
        raise ValueError(f"Unknown definiteness expectation: {expect}")
    return cls in ACCEPTED_CLASSES[expect]


@dataclass(frozen=True)
class DefinitenessVerdict:
    """Classification of one symmetric matrix"""

    cls: DefinitenessClass
    eigenvalues: Tuple[float, ...]
    min_eig: float
    max_eig: float
    scale: float
    margin: float
    zero_band: float
    asymmetry: float = 0.0
    minors: Tuple[float, ...] = ()
    minors_agree: Optional[bool] = None
    near_degenerate: bool = False

    @property
    def zero_count(self) -> int:
        return sum(1 for lam in self.eigenvalues if abs(lam) <= self.zero_band)

    def to_dict(self) -> dict:
        return {
            "class": self.cls.value,
            "eigenvalues": list(self.eigenvalues),
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "scale": self.scale,
            "margin": self.margin,
            "zero_band": self.zero_band,
            "asymmetry": self.asymmetry,
            "minors": list(self.minors),
            "minors_agree": self.minors_agree,
            "near_degenerate": self.near_degenerate,
        }


def relative_asymmetry(H: np.ndarray) -> float:
    norm = np.linalg.norm(H)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(H - H.T) / norm)


def leading_minors(H: np.ndarray) -> Tuple[float, ...]:
    return tuple(float(np.linalg.det(H[:k, :k])) for k in range(1, H.shape[0] + 1))


def _class_from_minors(minors: Tuple[float, ...]) -> DefinitenessClass:
    if all(d > 0 for d in minors):
        return DefinitenessClass.POSITIVE_DEFINITE
    if all((-1) ** (k + 1) * d > 0 for k, d in enumerate(minors)):
        return DefinitenessClass.NEGATIVE_DEFINITE
    return DefinitenessClass.INDEFINITE


def classify_hessian(H, scale_floor: float = DEFAULT_SCALE_FLOOR) -> DefinitenessVerdict:
    """Classify a symmetric matrix by the signs of its eigenvalues.

    Eigenvalues within 1e-9 * max(||H||_F, scale_floor) of zero count as zero. Both signs
    outside the band make the matrix Indefinite regardless of near-zero eigenvalues.
    An all-zero matrix is reported PositiveSemiDefinite.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise NonFiniteError("Matrix handed to classify_hessian has non-finite entries")

    asymmetry = relative_asymmetry(H)
    if asymmetry > ASYMMETRY_RTOL:
        raise AsymmetryTooLarge(f"Relative asymmetry {asymmetry:.3e} exceeds {ASYMMETRY_RTOL:g}")
    S = 0.5 * (H + H.T)

    frob = float(np.linalg.norm(S))
    scale = max(frob, scale_floor)
    band = ZERO_BAND_RTOL * scale
    eig = eigvalsh(S)

    positive = eig > band
    negative = eig < -band
    zero = ~(positive | negative)

    if positive.any() and negative.any():
        cls = DefinitenessClass.INDEFINITE
    elif negative.any():
        cls = (
            DefinitenessClass.NEGATIVE_SEMI_DEFINITE if zero.any() else DefinitenessClass.NEGATIVE_DEFINITE
        )
    elif positive.any():
        cls = (
            DefinitenessClass.POSITIVE_SEMI_DEFINITE if zero.any() else DefinitenessClass.POSITIVE_DEFINITE
        )
    else:
        cls = DefinitenessClass.POSITIVE_SEMI_DEFINITE

    if cls.is_definite:
        margin = float(np.min(np.abs(eig)) / scale)
    elif cls == DefinitenessClass.INDEFINITE:
        margin = -float(min(eig[-1], -eig[0]) / scale)
    else:
        margin = 0.0

    minors = leading_minors(S)
    minors_agree = None
    if np.all(np.abs(eig) > 10.0 * band):
        minors_agree = _class_from_minors(minors) == cls

    return DefinitenessVerdict(
        cls=cls,
        eigenvalues=tuple(float(x) for x in eig),
        min_eig=float(eig[0]),
        max_eig=float(eig[-1]),
        scale=frob,
        margin=margin,
        zero_band=band,
        asymmetry=asymmetry,
        minors=minors,
        minors_agree=minors_agree,
        near_degenerate=bool(zero.any()),
    )
