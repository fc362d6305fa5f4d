"""
ThermoCheck Stability Checker
Thermodynamic stability conditions in entropy, energy and measurable variables,
plus Gibbs and Maxwell residuals against closed-form equations of state
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.convexity.definiteness import ZERO_BAND_RTOL, DefinitenessClass, classify_hessian
from src.eos.eos_factory import BaseEOS
from src.eos.potentials import entropy_field, extensive_energy_field
from src.fields.scalar_field import PointLike, ScalarField, as_array
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

logger = get_logger(__name__)

TINY = np.finfo(float).tiny
GIBBS_TOLERANCE = 1e-12
MAXWELL_TOLERANCE = 1e-10

STRONGLY_STABLE = "strongly-stable"
STABLE = "stable"
VIOLATED = "violated"


@dataclass
class ConditionResult:
    """One inequality evaluated at every probe; margins are normalized, positive means satisfied"""

    key: str
    label: str
    variables: str
    inequality: str
    strict: bool
    margins: List[float]
    probes: List[Tuple[float, ...]] = field(repr=False, default_factory=list)
    band: float = ZERO_BAND_RTOL

    def violated_at(self, i: int) -> bool:
        m = self.margins[i]
        return m <= self.band if self.strict else m < -self.band

    def strictly_satisfied_at(self, i: int) -> bool:
        return self.margins[i] > self.band

    @property
    def violations(self) -> List[int]:
        return [i for i in range(len(self.margins)) if self.violated_at(i)]

    @property
    def weak_points(self) -> List[int]:
        return [i for i in range(len(self.margins)) if abs(self.margins[i]) <= self.band]

    @property
    def worst_margin(self) -> float:
        return min(self.margins, default=float("nan"))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "key": self.key,
            "label": self.label,
            "variables": self.variables,
            "inequality": self.inequality,
            "strict": self.strict,
            "worst_margin": self.worst_margin,
            "violation_count": len(self.violations),
            "violations": [
                {"probe": i, "coords": list(self.probes[i]), "condition": self.label, "margin": self.margins[i]}
                for i in self.violations
            ],
            "weak_points": self.weak_points,
        }


@dataclass
class StabilityReport:
    kind: str
    provenance: str
    variables: str
    probes: List[Tuple[float, ...]]
    conditions: List[ConditionResult]
    classes: List[DefinitenessClass] = field(default_factory=list)
    quantities: Dict[str, List[float]] = field(default_factory=dict)
    identities: Dict[str, float] = field(default_factory=dict)

    @property
    def strong(self) -> List[bool]:
        """Per-probe strong stability: every condition strictly satisfied"""
        return [all(c.strictly_satisfied_at(i) for c in self.conditions) for i in range(len(self.probes))]

    @property
    def verdict(self) -> str:
        if any(c.violations for c in self.conditions):
            return VIOLATED
        if all(self.strong):
            return STRONGLY_STABLE
        return STABLE

    @property
    def passed(self) -> bool:
        return self.verdict != VIOLATED

    def condition(self, key: str) -> ConditionResult:
        for c in self.conditions:
            if c.key == key:
                return c
        raise KeyError(key)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind,
            "provenance": self.provenance,
            "variables": self.variables,
            "probe_count": len(self.probes),
            "verdict": self.verdict,
            "conditions": [c.to_dict() for c in self.conditions],
            "strong_count": int(sum(self.strong)),
        }
        if self.classes:
            counts: Dict[str, int] = {}
            for cls in self.classes:
                counts[cls.value] = counts.get(cls.value, 0) + 1
            data["classes"] = dict(sorted(counts.items()))
        if self.quantities:
            data["quantities"] = {
                k: {"min": float(np.min(v)), "max": float(np.max(v))} for k, v in sorted(self.quantities.items())
            }
        if self.identities:
            data["identities"] = dict(sorted(self.identities.items()))
        return data

    def rows(self, check: str) -> List[Dict[str, Any]]:
        return [
            {
                "check": f"{check}:{c.key}",
                "probe": i,
                "coords": ";".join(repr(x) for x in self.probes[i]),
                "class": self.classes[i].value if self.classes else "",
                "margin": c.margins[i],
                "min_eig": float("nan"),
                "max_eig": float("nan"),
            }
            for c in self.conditions
            for i in range(len(self.probes))
        ]


def _log(report: StabilityReport):
    glyph = {STRONGLY_STABLE: "✅", STABLE: "⚠️", VIOLATED: "❌"}[report.verdict]
    logger.info(f"{glyph} {report.kind} stability of {report.provenance}: {report.verdict} at {len(report.probes)} probes")


def _hessian_margins(H: np.ndarray, sign: float) -> Tuple[float, float, float]:
    """Normalized margins of sign*H_00 >= 0, sign*H_11 >= 0 and det H >= 0"""
    n = max(float(np.linalg.norm(H)), TINY)
    det = H[0, 0] * H[1, 1] - H[0, 1] * H[1, 0]
    return sign * H[0, 0] / n, sign * H[1, 1] / n, det / (n * n)


def _hessian_report(
    kind: str,
    prefix: Tuple[str, str],
    sign: float,
    field_in: ScalarField,
    probes: Sequence[PointLike],
    variables: str,
    labels: Dict[str, str],
    threads: int,
):
    points = [as_array(p) for p in probes]
    if field_in.dimension != 2:
        raise ValueError(f"{kind} stability needs a two-variable potential, got dimension {field_in.dimension}")
    jets = ordered_map(field_in.jet_at, points, threads)
    margins = np.array([_hessian_margins(j.hessian, sign) for j in jets])
    relation = ">=" if sign > 0 else "<="
    stem = "U" if sign > 0 else "S"
    a, b = prefix
    first, second, mixed = f"{stem}_{a}{a}", f"{stem}_{b}{b}", f"{stem}_{a}{b}"
    texts = {
        first: f"{first} {relation} 0",
        second: f"{second} {relation} 0",
        "det": f"{first} {second} - {mixed}^2 >= 0",
    }
    coords = [tuple(float(c) for c in x) for x in points]
    conditions = [
        ConditionResult(
            key=key,
            label=labels.get(key, text),
            variables=variables,
            inequality=text,
            strict=False,
            margins=[float(m) for m in margins[:, i]],
            probes=coords,
        )
        for i, (key, text) in enumerate(texts.items())
    ]
    classes = [classify_hessian(j.hessian).cls for j in jets]
    report = StabilityReport(kind, field_in.provenance, variables, coords, conditions, classes)
    return report, jets


def check_entropy_stability(
    S_field: ScalarField, probes: Sequence[PointLike], threads: int = 1
) -> StabilityReport:
    """S_VV <= 0, S_UU <= 0 and S_VV S_UU - S_VU^2 >= 0; strict everywhere means strongly stable"""
    report, _ = _hessian_report("entropy", ("V", "U"), -1.0, S_field, probes, "(v,u)", {}, threads)
    _log(report)
    return report


def check_energy_stability(
    U_field: ScalarField,
    probes: Sequence[PointLike],
    eos: Optional[BaseEOS] = None,
    threads: int = 1,
) -> StabilityReport:
    """U_VV >= 0, U_SS >= 0 and U_VV U_SS - U_VS^2 >= 0.

    With an EOS the second derivatives are also compared with the closed-form identities
    U_VV = -p_V, U_SS = theta_S and U_VS = -p_S = theta_V.
    """
    labels = eos.condition_labels() if eos is not None else {}
    report, jets = _hessian_report("energy", ("V", "S"), 1.0, U_field, probes, "(v,s)", labels, threads)
    if eos is not None:
        report.identities = _energy_identities(eos, [as_array(p) for p in probes], jets, threads)
    _log(report)
    return report


def _energy_identities(eos: BaseEOS, points, jets, threads: int) -> Dict[str, float]:
    p_field = eos.pressure_vs_field()
    t_field = eos.temperature_vs_field()
    p_jets = ordered_map(p_field.jet_at, points, threads)
    t_jets = ordered_map(t_field.jet_at, points, threads)
    worst = {"U_VV = -p_V": 0.0, "U_SS = theta_S": 0.0, "U_VS = -p_S": 0.0, "U_VS = theta_V": 0.0}
    for jet, pj, tj in zip(jets, p_jets, t_jets):
        H = jet.hessian
        n = max(float(np.linalg.norm(H)), TINY)
        pairs = {
            "U_VV = -p_V": (H[0, 0], -pj.gradient[0]),
            "U_SS = theta_S": (H[1, 1], tj.gradient[1]),
            "U_VS = -p_S": (H[0, 1], -pj.gradient[1]),
            "U_VS = theta_V": (H[0, 1], tj.gradient[0]),
        }
        for name, (lhs, rhs) in pairs.items():
            worst[name] = max(worst[name], abs(lhs - rhs) / n)
    return worst


def check_measurable_stability(
    eos: BaseEOS,
    probes: Sequence[PointLike],
    variables: str = "v_theta",
    threads: int = 1,
) -> StabilityReport:
    """u_theta > 0 and p_v < 0 (or p_rho > 0) from the caloric and thermal equations of state.

    Also reports c_v = u_theta and the isothermal compressibility kappa = -1/(v p_v) = 1/(rho p_rho).
    """
    points = [as_array(p) for p in probes]
    thermal = eos.thermal_field(variables)
    caloric = eos.caloric_field(variables)
    p_jets = ordered_map(lambda x: thermal.jet_at(x, active=(0,)), points, threads)
    u_jets = ordered_map(lambda x: caloric.jet_at(x, active=(1,)), points, threads)

    cv_margins, p_margins, cv, kappa = [], [], [], []
    for x, pj, uj in zip(points, p_jets, u_jets):
        u_theta = uj.gradient[0]
        cv.append(float(u_theta))
        cv_margins.append(u_theta / max(abs(u_theta), abs(uj.value) / x[1], TINY))
        slope = pj.gradient[0]
        if variables == "v_theta":
            p_margins.append(-slope / max(abs(slope), abs(pj.value) / x[0], TINY))
            kappa.append(-1.0 / (x[0] * slope) if slope != 0.0 else float("inf"))
        else:
            p_margins.append(slope / max(abs(slope), abs(pj.value) / x[0], TINY))
            kappa.append(1.0 / (x[0] * slope) if slope != 0.0 else float("inf"))

    coords = [tuple(float(c) for c in x) for x in points]
    if variables == "v_theta":
        names, pressure_key, pressure_text = "(v,theta)", "p_v", "p_v(v,theta) < 0"
    else:
        names, pressure_key, pressure_text = "(rho,theta)", "p_rho", "p_rho(rho,theta) > 0"
    conditions = [
        ConditionResult("u_theta", "u_theta > 0", names, "u_theta > 0", True, [float(m) for m in cv_margins], coords),
        ConditionResult(pressure_key, pressure_text, names, pressure_text, True, [float(m) for m in p_margins], coords),
    ]
    report = StabilityReport(
        "measurable",
        f"{eos.family} thermal/caloric",
        names,
        coords,
        conditions,
        quantities={"c_v": cv, "kappa": kappa},
    )
    _log(report)
    return report


@dataclass
class GibbsMaxwellReport:
    provenance: str
    probes: List[Tuple[float, ...]]
    pressure: List[float]
    temperature: List[float]
    maxwell: List[float]
    gibbs_tolerance: float = GIBBS_TOLERANCE
    maxwell_tolerance: float = MAXWELL_TOLERANCE

    @property
    def worst(self) -> Dict[str, float]:
        return {
            "pressure": max(self.pressure, default=0.0),
            "temperature": max(self.temperature, default=0.0),
            "maxwell": max(self.maxwell, default=0.0),
        }

    @property
    def passed(self) -> bool:
        w = self.worst
        return (
            w["pressure"] <= self.gibbs_tolerance
            and w["temperature"] <= self.gibbs_tolerance
            and w["maxwell"] <= self.maxwell_tolerance
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "provenance": self.provenance,
            "probe_count": len(self.probes),
            "worst": self.worst,
            "gibbs_tolerance": self.gibbs_tolerance,
            "maxwell_tolerance": self.maxwell_tolerance,
            "passed": self.passed,
        }


def check_gibbs_and_maxwell(
    u_field: ScalarField,
    eos: BaseEOS,
    probes: Sequence[PointLike],
    threads: int = 1,
    gibbs_tolerance: float = GIBBS_TOLERANCE,
    maxwell_tolerance: float = MAXWELL_TOLERANCE,
) -> GibbsMaxwellReport:
    """Residuals of u_v = -p, u_s = theta and theta_v = -p_s, each relative to a local scale"""
    points = [as_array(p) for p in probes]
    p_field = eos.pressure_vs_field()
    t_field = eos.temperature_vs_field()
    u_jets = ordered_map(u_field.jet_at, points, threads)
    p_jets = ordered_map(p_field.jet_at, points, threads)
    t_jets = ordered_map(t_field.jet_at, points, threads)

    pressure, temperature, maxwell = [], [], []
    for x, uj, pj, tj in zip(points, u_jets, p_jets, t_jets):
        p_scale = max(abs(pj.value), abs(x[0] * pj.gradient[0]), TINY)
        t_scale = max(abs(tj.value), abs(x[1] * tj.gradient[1]), TINY)
        m_scale = max(abs(tj.gradient[0]), abs(pj.gradient[1]), TINY)
        pressure.append(abs(uj.gradient[0] + pj.value) / p_scale)
        temperature.append(abs(uj.gradient[1] - tj.value) / t_scale)
        maxwell.append(abs(tj.gradient[0] + pj.gradient[1]) / m_scale)

    report = GibbsMaxwellReport(
        u_field.provenance,
        [tuple(float(c) for c in x) for x in points],
        pressure,
        temperature,
        maxwell,
        gibbs_tolerance,
        maxwell_tolerance,
    )
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} Gibbs/Maxwell residuals for {u_field.provenance}: {report.worst}")
    return report


@dataclass
class EquivalenceReport:
    """Probe-wise comparison of strong-stability verdicts across variable sets"""

    name: str
    reports: Dict[str, StabilityReport]
    mismatches: List[int]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "mismatches": self.mismatches,
            "verdicts": {k: r.verdict for k, r in sorted(self.reports.items())},
        }


def _compare(name: str, reports: Dict[str, StabilityReport]) -> EquivalenceReport:
    flags = [r.strong for r in reports.values()]
    mismatches = [i for i in range(len(flags[0])) if len({f[i] for f in flags}) > 1]
    report = EquivalenceReport(name, reports, mismatches)
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} {name}: {len(mismatches)} probe-wise mismatches")
    return report


def check_stability_equivalence(
    eos: BaseEOS, probes_v_theta: Sequence[PointLike], threads: int = 1
) -> EquivalenceReport:
    """Energy, entropy (by exchange) and measurable verdicts at corresponding probes"""
    v_theta = [as_array(p) for p in probes_v_theta]
    vs = [eos.vs_from_v_theta(x[0], x[1]) for x in v_theta]
    vu = [eos.vu_from_vs(x) for x in vs]
    reports = {
        "energy": check_energy_stability(eos.energy_field(), vs, eos, threads),
        "entropy": check_entropy_stability(entropy_field(eos), vu, threads),
        "measurable": check_measurable_stability(eos, v_theta, "v_theta", threads),
    }
    return _compare("stability equivalence", reports)


def check_mass_scaling(
    eos: BaseEOS, probes_vs: Sequence[PointLike], mass: float = 2.0, threads: int = 1
) -> EquivalenceReport:
    """Verdicts of U(V,S) = M u(V/M,S/M) at (M v, M s) against u(v,s) at (v, s)"""
    vs = [as_array(p) for p in probes_vs]
    reports = {
        "specific": check_energy_stability(eos.energy_field(), vs, threads=threads),
        "extensive": check_energy_stability(extensive_energy_field(eos, mass), [mass * x for x in vs], threads=threads),
    }
    return _compare(f"mass scaling (M = {mass:g})", reports)


class StabilityChecker:
    """Runs every stability check for one EOS over a set of primitive probes"""

    def __init__(
        self,
        eos: BaseEOS,
        threads: int = 1,
        mass: float = 2.0,
        gibbs_tolerance: float = GIBBS_TOLERANCE,
        maxwell_tolerance: float = MAXWELL_TOLERANCE,
    ):
        self.eos = eos
        self.threads = threads
        self.mass = mass
        self.gibbs_tolerance = gibbs_tolerance
        self.maxwell_tolerance = maxwell_tolerance
        self.logger = get_logger(__name__)

    def run(self, probes_rho_theta: Sequence[PointLike]) -> Dict[str, Any]:
        """Probes are (rho, theta) states; results keyed by check name"""
        rho_theta = [as_array(p) for p in probes_rho_theta]
        v_theta = [np.array([1.0 / x[0], x[1]]) for x in rho_theta]
        vs = [self.eos.vs_from_v_theta(x[0], x[1]) for x in v_theta]
        self.logger.info(f"🛡️ Stability checks for {self.eos!r} at {len(rho_theta)} probes")

        energy_field = self.eos.energy_field()
        equivalence = check_stability_equivalence(self.eos, v_theta, self.threads)
        return {
            "energy": equivalence.reports["energy"],
            "entropy": equivalence.reports["entropy"],
            "measurable": equivalence.reports["measurable"],
            "measurable_rho": check_measurable_stability(self.eos, rho_theta, "rho_theta", self.threads),
            "gibbs_maxwell": check_gibbs_and_maxwell(
                energy_field, self.eos, vs, self.threads, self.gibbs_tolerance, self.maxwell_tolerance
            ),
            "equivalence": equivalence,
            "mass_scaling": check_mass_scaling(self.eos, vs, self.mass, self.threads),
        }
