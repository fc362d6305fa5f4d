"""
ThermoCheck Region Sweeps
Samplers over parameter boxes and aggregated definiteness reports
"""

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.convexity.definiteness import (
    DEFAULT_SCALE_FLOOR,
    DefinitenessClass,
    DefinitenessVerdict,
    classify_hessian,
)
from src.core.errors import SamplerExhausted
from src.fields.scalar_field import DomainSpec, ScalarField
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)

MIN_ACCEPTANCE = 0.01


class BoxSampler(ABC):
    """Draws admissible points from a finite box"""

    def __init__(self, lower: Sequence[float], upper: Sequence[float]):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if self.lower.shape != self.upper.shape or np.any(self.lower >= self.upper):
            raise ValueError(f"Invalid sampling box: {lower} .. {upper}")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("Sampling box must be finite")

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @abstractmethod
    def sample(self, accept: Optional[Callable[[np.ndarray], bool]] = None) -> List[np.ndarray]:
        pass

    @abstractmethod
    def describe(self) -> Dict:
        pass


class RandomSampler(BoxSampler):
    """Uniform rejection sampling with a fixed seed"""

    def __init__(self, lower, upper, count: int, seed: int):
        super().__init__(lower, upper)
        if count < 1:
            raise ValueError("Random sampler needs count >= 1")
        self.count = int(count)
        self.seed = int(seed)

    def sample(self, accept=None) -> List[np.ndarray]:
        rng = np.random.default_rng(self.seed)
        accepted: List[np.ndarray] = []
        drawn = 0
        batch = max(16, self.count)
        while len(accepted) < self.count:
            candidates = self.lower + (self.upper - self.lower) * rng.random((batch, self.dimension))
            for x in candidates:
                drawn += 1
                if accept is None or accept(x):
                    accepted.append(x)
                    if len(accepted) == self.count:
                        break
            if drawn >= 100 * self.count and len(accepted) < MIN_ACCEPTANCE * drawn:
                raise SamplerExhausted(
                    f"Random sampler accepted {len(accepted)} of {drawn} candidates"
                )
        return accepted

    def describe(self) -> Dict:
        return {
            "kind": "random",
            "count": self.count,
            "seed": self.seed,
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
        }


class GridSampler(BoxSampler):
    """Cell-centred tensor grid, resolution points per axis"""

    def __init__(self, lower, upper, resolution: int):
        super().__init__(lower, upper)
        if resolution < 2:
            raise ValueError("Grid sampler needs resolution >= 2")
        self.resolution = int(resolution)

    def sample(self, accept=None) -> List[np.ndarray]:
        axes = [
            lo + (hi - lo) * (np.arange(self.resolution) + 0.5) / self.resolution
            for lo, hi in zip(self.lower, self.upper)
        ]
        points = [np.array(p) for p in itertools.product(*axes)]
        accepted = [p for p in points if accept is None or accept(p)]
        if len(accepted) < max(1.0, MIN_ACCEPTANCE * len(points)):
            raise SamplerExhausted(f"Grid sampler accepted {len(accepted)} of {len(points)} points")
        return accepted

    def describe(self) -> Dict:
        return {
            "kind": "grid",
            "resolution": self.resolution,
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
        }


@dataclass
class RegionReport:
    """Per-probe verdicts over a sampled region plus aggregates"""

    provenance: str
    sampler: Dict
    expect: Optional[str]
    probes: List[Tuple[float, ...]]
    verdicts: List[DefinitenessVerdict]
    counts: Dict[str, int] = field(default_factory=dict)
    worst_margin: float = float("inf")
    uniform_bound: float = float("nan")
    failures: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def classes(self) -> List[DefinitenessClass]:
        return [v.cls for v in self.verdicts]

    def to_dict(self) -> Dict:
        return {
            "provenance": self.provenance,
            "sampler": self.sampler,
            "expect": self.expect,
            "probe_count": len(self.probes),
            "counts": dict(sorted(self.counts.items())),
            "worst_margin": self.worst_margin,
            "uniform_bound": self.uniform_bound,
            "passed": self.passed,
            "failures": self.failures,
            "note": f"no violation found among {len(self.probes)} probes" if self.passed else "",
        }

    def rows(self, check: str) -> List[Dict]:
        return [
            {
                "check": check,
                "probe": i,
                "coords": ";".join(repr(c) for c in coords),
                "class": v.cls.value,
                "margin": v.margin,
                "min_eig": v.min_eig,
                "max_eig": v.max_eig,
            }
            for i, (coords, v) in enumerate(zip(self.probes, self.verdicts))
        ]


_EXPECTED = {
    "positive": DefinitenessClass.POSITIVE_DEFINITE,
    "negative": DefinitenessClass.NEGATIVE_DEFINITE,
}


def region_sweep(
    field: ScalarField,
    sampler: BoxSampler,
    domain: Optional[DomainSpec] = None,
    mapping: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    expect: Optional[str] = None,
    scale_floor: float = DEFAULT_SCALE_FLOOR,
    threads: int = 1,
) -> RegionReport:
    """Classify Hessians of field at sampled probes.

    Samples live in the sampler's coordinates; mapping (if given) sends them to the
    field's variables. expect is "positive", "negative" or None; the uniform bound is
    min lambda_min for the positive case and min(-lambda_max) for the negative case.
    """
    if expect is not None and expect not in _EXPECTED:
        raise ValueError(f"Unknown sweep expectation: {expect}")
    to_field = mapping or (lambda x: x)

    def accept(x: np.ndarray) -> bool:
        if domain is not None and not domain.contains(x):
            return False
        return field.contains(to_field(x))

    samples = sampler.sample(accept)

    def classify(x: np.ndarray) -> DefinitenessVerdict:
        return classify_hessian(field.jet_at(to_field(x)).hessian, scale_floor)

    verdicts = ordered_map(classify, samples, threads)
    probes = [tuple(float(c) for c in to_field(x)) for x in samples]

    counts: Dict[str, int] = {}
    for v in verdicts:
        counts[v.cls.value] = counts.get(v.cls.value, 0) + 1

    failures = []
    if expect is not None:
        target = _EXPECTED[expect]
        for i, v in enumerate(verdicts):
            if v.cls != target:
                failures.append({"probe": i, "coords": list(probes[i]), "class": v.cls.value, "margin": v.margin})
        bounds = [v.min_eig if expect == "positive" else -v.max_eig for v in verdicts]
    else:
        bounds = [v.min_eig for v in verdicts]

    report = RegionReport(
        provenance=field.provenance,
        sampler=sampler.describe(),
        expect=expect,
        probes=probes,
        verdicts=verdicts,
        counts=counts,
        worst_margin=min(v.margin for v in verdicts),
        uniform_bound=float(min(bounds)),
        failures=failures,
    )
    status = "✅" if report.passed else "❌"
    logger.info(
        f"{status} sweep of {field.provenance}: {len(verdicts)} probes, counts={report.counts}, "
        f"worst margin {report.worst_margin:.3e}"
    )
    return report


def violation_interval(
    coords: Sequence[Sequence[float]], violated: Sequence[bool], axis: int
) -> Optional[Tuple[float, float]]:
    """Extent along one axis of the probes flagged as violated, or None"""
    values = [c[axis] for c, bad in zip(coords, violated) if bad]
    if not values:
        return None
    return float(min(values)), float(max(values))
