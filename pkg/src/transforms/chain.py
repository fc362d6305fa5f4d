"""
ThermoCheck Transformation Chains
Declarative transform records, chain specs and the chain runner
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.convexity.definiteness import (
    DEFAULT_SCALE_FLOOR,
    ACCEPTED_CLASSES,
    DefinitenessVerdict,
    classify_hessian,
    matches_expectation,
)
from src.core.errors import ChainStageError, DimensionMismatch, ThermoCheckError
from src.fields.scalar_field import Jet2, PointLike, ScalarField, as_array
from src.transforms.affine import add_kinetic, affine, sign_flip
from src.transforms.base import TransformedField
from src.transforms.exchange import exchange
from src.transforms.legendre import legendre
from src.transforms.reciprocal import reciprocal
from src.transforms.solvers import DEFAULT_SETTINGS, SolverSettings
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)


class TransformKind(str, Enum):
    LEGENDRE = "legendre"
    LEGENDRE_CONCAVE = "legendre_concave"
    RECIPROCAL = "reciprocal"
    EXCHANGE = "exchange"
    AFFINE = "affine"
    SIGN_FLIP = "sign_flip"
    ADD_KINETIC = "add_kinetic"


_PIVOTED = (TransformKind.RECIPROCAL, TransformKind.EXCHANGE)


@dataclass(frozen=True)
class TransformRecord:
    """One transformation step with everything needed to rebuild it"""

    kind: TransformKind
    label: str = ""
    expect: str = "any"
    pivot_index: Optional[int] = None
    pivot_sign: Optional[float] = None
    signs: Tuple[float, ...] = ()
    matrix: Tuple[Tuple[float, ...], ...] = ()
    offset: Tuple[float, ...] = ()
    factor: float = 1.0
    require_invertible: bool = True
    seed: Tuple[float, ...] = ()
    # exchange only: multiply the pivot seed by this (1-based) coordinate of the query point
    seed_scale_index: Optional[int] = None
    velocity: Tuple[float, ...] = ()
    position: int = 1
    settings: SolverSettings = DEFAULT_SETTINGS

    def __post_init__(self):
        object.__setattr__(self, "kind", TransformKind(self.kind))
        if self.expect not in ACCEPTED_CLASSES:
            raise ValueError(f"Unknown stage expectation: {self.expect}")
        if self.kind in _PIVOTED and self.pivot_index is None:
            raise ValueError(f"{self.kind.value} needs a pivot_index")
        if self.pivot_index is not None and self.pivot_index < 1:
            raise ValueError("pivot_index is 1-based")
        if self.kind in (TransformKind.LEGENDRE, TransformKind.LEGENDRE_CONCAVE, TransformKind.EXCHANGE):
            if not self.seed:
                raise ValueError(f"{self.kind.value} needs a seed")
        if self.kind == TransformKind.SIGN_FLIP and not self.signs:
            raise ValueError("sign_flip needs signs")
        if self.kind == TransformKind.AFFINE and not self.matrix:
            raise ValueError("affine needs a matrix")
        if self.kind == TransformKind.ADD_KINETIC and not self.velocity:
            raise ValueError("add_kinetic needs a velocity (one entry per component)")

    def output_dimension(self, input_dimension: int) -> int:
        if self.kind == TransformKind.AFFINE:
            return len(self.matrix[0])
        if self.kind == TransformKind.ADD_KINETIC:
            return input_dimension + len(self.velocity)
        return input_dimension

    def check_input(self, input_dimension: int):
        if self.pivot_index is not None and self.pivot_index > input_dimension:
            raise DimensionMismatch(f"{self.label or self.kind.value}: pivot {self.pivot_index} > {input_dimension}")
        if self.kind == TransformKind.SIGN_FLIP and len(self.signs) != input_dimension:
            raise DimensionMismatch(f"{self.label or self.kind.value}: {len(self.signs)} signs for {input_dimension} variables")
        if self.kind == TransformKind.AFFINE and len(self.matrix) != input_dimension:
            raise DimensionMismatch(f"{self.label or self.kind.value}: matrix rows do not match {input_dimension}")
        if self.kind in (TransformKind.LEGENDRE, TransformKind.LEGENDRE_CONCAVE) and len(self.seed) != input_dimension:
            raise DimensionMismatch(f"{self.label or self.kind.value}: seed length does not match {input_dimension}")

    def to_dict(self) -> Dict:
        data = {"kind": self.kind.value, "label": self.label, "expect": self.expect}
        optional = {
            "pivot_index": self.pivot_index,
            "pivot_sign": self.pivot_sign,
            "signs": list(self.signs),
            "matrix": [list(row) for row in self.matrix],
            "offset": list(self.offset),
            "seed": list(self.seed),
            "seed_scale_index": self.seed_scale_index,
            "velocity": list(self.velocity),
        }
        data.update({k: v for k, v in optional.items() if v not in (None, [])})
        if self.factor != 1.0:
            data["factor"] = self.factor
        if not self.require_invertible:
            data["require_invertible"] = False
        if self.kind == TransformKind.ADD_KINETIC:
            data["position"] = self.position
        if self.settings != DEFAULT_SETTINGS:
            data["settings"] = self.settings.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "TransformRecord":
        data = dict(data)
        if "settings" in data:
            data["settings"] = SolverSettings.from_dict(data["settings"])
        for key in ("signs", "offset", "seed", "velocity"):
            if key in data:
                data[key] = tuple(float(x) for x in data[key])
        if "matrix" in data:
            data["matrix"] = tuple(tuple(float(x) for x in row) for row in data["matrix"])
        return cls(**data)


@dataclass(frozen=True)
class ChainSpec:
    """Ordered transform records plus the expected verdict of the starting field"""

    name: str
    records: Tuple[TransformRecord, ...]
    start_label: str = "start"
    start_expect: str = "any"
    description: str = ""

    def check_dimensions(self, start_dimension: int) -> List[int]:
        dims = [start_dimension]
        for record in self.records:
            record.check_input(dims[-1])
            dims.append(record.output_dimension(dims[-1]))
        return dims

    @property
    def labels(self) -> List[str]:
        return [self.start_label] + [r.label or r.kind.value for r in self.records]

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "description": self.description,
            "start_label": self.start_label,
            "start_expect": self.start_expect,
            "records": [r.to_dict() for r in self.records],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ChainSpec":
        return cls(
            name=data["name"],
            records=tuple(TransformRecord.from_dict(r) for r in data["records"]),
            start_label=data.get("start_label", "start"),
            start_expect=data.get("start_expect", "any"),
            description=data.get("description", ""),
        )


def apply_transform(field_in: ScalarField, record: TransformRecord) -> TransformedField:
    """Build the output field of one step"""
    record.check_input(field_in.dimension)
    kind = record.kind
    if kind in (TransformKind.LEGENDRE, TransformKind.LEGENDRE_CONCAVE):
        return legendre(
            field_in,
            np.array(record.seed),
            record.settings,
            concave=kind == TransformKind.LEGENDRE_CONCAVE,
        )
    if kind == TransformKind.RECIPROCAL:
        return reciprocal(field_in, record.pivot_index, record.pivot_sign)
    if kind == TransformKind.EXCHANGE:
        base = record.seed[0]
        if record.seed_scale_index is not None:
            scale_at = record.seed_scale_index - 1

            def seed(w: np.ndarray) -> float:
                return base * w[scale_at]

        else:
            seed = base
        return exchange(field_in, record.pivot_index, seed, record.settings, record.pivot_sign)
    if kind == TransformKind.AFFINE:
        return affine(
            field_in,
            np.array(record.matrix),
            np.array(record.offset) if record.offset else None,
            record.factor,
            record.require_invertible,
        )
    if kind == TransformKind.SIGN_FLIP:
        return sign_flip(field_in, record.signs)
    if kind == TransformKind.ADD_KINETIC:
        return add_kinetic(field_in, len(record.velocity), record.position, record.velocity)
    raise ValueError(f"Unknown transform kind: {kind}")


@dataclass
class StageReport:
    index: int
    label: str
    kind: str
    expect: str
    provenance: str
    probes: List[Tuple[float, ...]]
    verdicts: List[DefinitenessVerdict]
    mismatches: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict:
        counts: Dict[str, int] = {}
        for v in self.verdicts:
            counts[v.cls.value] = counts.get(v.cls.value, 0) + 1
        return {
            "index": self.index,
            "label": self.label,
            "kind": self.kind,
            "expect": self.expect,
            "passed": self.passed,
            "counts": dict(sorted(counts.items())),
            "worst_margin": min((v.margin for v in self.verdicts), default=float("nan")),
            "mismatches": [
                {"probe": i, "coords": list(self.probes[i]), "class": self.verdicts[i].cls.value}
                for i in self.mismatches
            ],
        }


@dataclass
class ChainReport:
    name: str
    stages: List[StageReport]
    fields: List[ScalarField] = field(default_factory=list, repr=False)
    jets: List[List[Jet2]] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(stage.passed for stage in self.stages)

    @property
    def first_mismatch(self) -> Optional[Tuple[int, int]]:
        for stage in self.stages:
            if stage.mismatches:
                return stage.index, stage.mismatches[0]
        return None

    @property
    def final_field(self) -> ScalarField:
        return self.fields[-1]

    def to_dict(self) -> Dict:
        first = self.first_mismatch
        return {
            "name": self.name,
            "passed": self.passed,
            "first_mismatch": None if first is None else {"stage": first[0], "probe": first[1]},
            "stages": [s.to_dict() for s in self.stages],
        }

    def rows(self) -> List[Dict]:
        return [
            {
                "check": f"chain:{self.name}:{stage.label}",
                "probe": i,
                "coords": ";".join(repr(c) for c in coords),
                "class": v.cls.value,
                "margin": v.margin,
                "min_eig": v.min_eig,
                "max_eig": v.max_eig,
            }
            for stage in self.stages
            for i, (coords, v) in enumerate(zip(stage.probes, stage.verdicts))
        ]


def _stage(index, label, kind, expect, stage_field, points, threads, scale_floor):
    def evaluate(x):
        jet = stage_field.jet_at(x)
        return jet, classify_hessian(jet.hessian, scale_floor)

    try:
        results = ordered_map(evaluate, points, threads)
    except ThermoCheckError as e:
        raise ChainStageError(index, label, e) from e
    jets = [r[0] for r in results]
    verdicts = [r[1] for r in results]
    mismatches = [i for i, v in enumerate(verdicts) if not matches_expectation(v.cls, expect)]
    report = StageReport(
        index=index,
        label=label,
        kind=kind,
        expect=expect,
        provenance=stage_field.provenance,
        probes=[tuple(float(c) for c in x) for x in points],
        verdicts=verdicts,
        mismatches=mismatches,
    )
    return report, jets


def run_chain(
    chain: ChainSpec,
    start: ScalarField,
    probes: Sequence[PointLike],
    threads: int = 1,
    scale_floor: float = DEFAULT_SCALE_FLOOR,
) -> ChainReport:
    """Apply each step, map probes forward, classify each stage's Hessians against expectations"""
    chain.check_dimensions(start.dimension)
    points = [as_array(p) for p in probes]
    current: ScalarField = start

    stage, jets = _stage(0, chain.start_label, "start", chain.start_expect, start, points, threads, scale_floor)
    report = ChainReport(chain.name, [stage], [start], [jets])

    for index, record in enumerate(chain.records, start=1):
        label = record.label or record.kind.value
        try:
            nxt = apply_transform(current, record)
            points = [nxt.map_point(x, jet) for x, jet in zip(points, jets)]
        except ThermoCheckError as e:
            raise ChainStageError(index, label, e) from e
        stage, jets = _stage(index, label, record.kind.value, record.expect, nxt, points, threads, scale_floor)
        report.stages.append(stage)
        report.fields.append(nxt)
        report.jets.append(jets)
        current = nxt

    status = "✅" if report.passed else "❌"
    logger.info(f"{status} chain {chain.name}: {len(report.stages)} stages at {len(points)} probes")
    return report
