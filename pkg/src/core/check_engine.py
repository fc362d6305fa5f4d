"""
ThermoCheck Check Engine
Runs the configured check suites for one EOS and assembles the run report
"""

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src import __version__
from src.convexity.definiteness import DefinitenessClass, classify_hessian
from src.convexity.region import BoxSampler, GridSampler, RandomSampler, region_sweep, violation_interval
from src.core.config_manager import ConfigManager
from src.core.errors import ThermoCheckError
from src.eos.eos_factory import BaseEOS, EOSFactory
from src.eos.potentials import entropy_field, legendre_dual_energy
from src.eos.van_der_waals import vdw_critical_point
from src.euler.conserved import (
    ConservedState,
    primitive_to_conserved,
    primitive_to_density_coords,
    split_primitive,
)
from src.euler.densities import (
    compare_entropy_routes,
    energy_density_field,
    entropy_density_conserved,
    kinetic_density_hessian,
    relative_energy,
)
from src.euler.fluxes import entropy_pair_consistency
from src.euler.symmetrizer import godunov_chain, symmetrizer_sweep
from src.fields.scalar_field import DomainSpec
from src.stability.stability_checker import StabilityChecker
from src.transforms.affine import add_kinetic
from src.transforms.catalog import build_chain, chain_catalog, default_velocity
from src.transforms.chain import run_chain
from src.transforms.exchange import exchange_congruence_residual
from src.transforms.legendre import hessian_identity_residual
from src.transforms.reciprocal import reciprocal, reciprocal_congruence_residual
from src.transforms.solvers import SolverSettings
from src.utils.logger import get_logger
from src.utils.parallel import ordered_map

REPORT_SCHEMA = "report/v1"
KINETIC_FACTOR_TOLERANCE = 1e-14
IDENTITY_TOLERANCE = 1e-8
SELF_PAIR_TOLERANCE = 1e-12

PASS = "pass"
VIOLATION = "violation"
ERROR = "error"


@dataclass
class SuiteOutcome:
    name: str
    status: str
    result: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    exit_code: int = 0
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"status": self.status, "exit_code": self.exit_code, "result": self.result}
        if self.error:
            data["error"] = self.error
        return data


@dataclass
class RunResult:
    report: Dict[str, Any]
    rows: List[Dict[str, Any]]
    timings: Dict[str, float]
    exit_code: int


def _passed_status(passed: bool) -> Tuple[str, int]:
    return (PASS, 0) if passed else (VIOLATION, 1)


class CheckEngine:
    """Batch runner for the configured check suites"""

    def __init__(self, config_manager: ConfigManager, threads: int = 1):
        self.config_manager = config_manager
        self.logger = get_logger(__name__)
        self.threads = threads
        self.tolerances = config_manager.get_tolerances()
        self.settings = SolverSettings.from_dict(config_manager.get_solver_config())
        self.d = int(config_manager.get("dimension", 3))
        self.eos: Optional[BaseEOS] = None

        self.suites: Dict[str, Callable[[], SuiteOutcome]] = {
            "stability": self._run_stability,
            "chains": self._run_chains,
            "euler-hessians": self._run_euler_hessians,
            "symmetrizer": self._run_symmetrizer,
            "relative-energy": self._run_relative_energy,
        }

    def build_eos(self) -> BaseEOS:
        eos_config = self.config_manager.get_eos_config()
        self.eos = EOSFactory.create_eos(
            eos_config["family"], eos_config.get("params", {}), eos_config.get("reference", {})
        )
        return self.eos

    # -- sampling --

    def _sampler(self, lower: Sequence[float], upper: Sequence[float], count: int, seed_offset: int = 0) -> BoxSampler:
        sampler = self.config_manager.get_sampler_config()
        if sampler["kind"] == "grid":
            return GridSampler(lower, upper, sampler["resolution"])
        return RandomSampler(lower, upper, count, int(sampler["seed"]) + seed_offset)

    def _admissible_rho_theta(self) -> Callable[[np.ndarray], bool]:
        thermal = self.eos.thermal_field("rho_theta")
        return lambda x: thermal.contains(np.array([x[0], x[-1]]))

    def _rho_theta_probes(self, count: int) -> List[np.ndarray]:
        region = self.config_manager.get_region_config()
        lower = [region["rho"][0], region["theta"][0]]
        upper = [region["rho"][1], region["theta"][1]]
        return self._sampler(lower, upper, count).sample(self._admissible_rho_theta())

    def _primitive_box(self) -> Tuple[List[float], List[float]]:
        region = self.config_manager.get_region_config()
        lower = [region["rho"][0]] + [region["velocity"][0]] * self.d + [region["theta"][0]]
        upper = [region["rho"][1]] + [region["velocity"][1]] * self.d + [region["theta"][1]]
        return lower, upper

    def _primitive_sampler(self, count: int, seed_offset: int = 0) -> BoxSampler:
        lower, upper = self._primitive_box()
        return self._sampler(lower, upper, count, seed_offset)

    def _primitive_domain(self) -> DomainSpec:
        lower, upper = self._primitive_box()
        # the sampler box is open, so widen it a little for the membership test
        pad = [1e-9 * max(1.0, abs(lo), abs(hi)) for lo, hi in zip(lower, upper)]
        return DomainSpec(
            [lo - p for lo, p in zip(lower, pad)],
            [hi + p for hi, p in zip(upper, pad)],
            self._admissible_rho_theta(),
            "admissible primitive states",
        )

    def _primitive_probes(self, count: int, seed_offset: int = 0) -> List[np.ndarray]:
        domain = self._primitive_domain()
        return self._primitive_sampler(count, seed_offset).sample(domain.contains)

    def _count(self, key: str) -> int:
        return int(self.config_manager.get(f"counts.{key}"))

    def _velocity(self) -> List[float]:
        velocity = self.config_manager.get("chains.velocity")
        return default_velocity(self.d) if velocity is None else list(velocity)

    # -- suites --

    def _run_stability(self) -> SuiteOutcome:
        probes = self._rho_theta_probes(self._count("stability"))
        checker = StabilityChecker(
            self.eos,
            self.threads,
            float(self.config_manager.get("chains.mass", 2.0)),
            self.tolerances["gibbs"],
            self.tolerances["maxwell"],
        )
        results = checker.run(probes)
        result = {name: r.to_dict() for name, r in results.items()}
        rows: List[Dict[str, Any]] = []
        for name in ("energy", "entropy", "measurable", "measurable_rho"):
            rows.extend(results[name].rows(f"stability:{name}"))

        if self.eos.family == "vdw":
            v_c, theta_c, p_c = vdw_critical_point(self.eos)
            measurable = results["measurable"]
            p_v = measurable.condition("p_v")
            interval = violation_interval(
                measurable.probes, [p_v.violated_at(i) for i in range(len(measurable.probes))], axis=0
            )
            result["spinodal"] = {
                "critical_point": {"v": v_c, "theta": theta_c, "p": p_c},
                "p_v_violation_interval": None if interval is None else list(interval),
            }

        passed = all(r.passed for r in results.values())
        status, code = _passed_status(passed)
        return SuiteOutcome("stability", status, result, rows, code)

    def _run_chains(self) -> SuiteOutcome:
        names = self.config_manager.get("chains.names") or chain_catalog()
        mass = float(self.config_manager.get("chains.mass", 2.0))
        velocity = self._velocity()
        rho_theta = self._rho_theta_probes(self._count("chains"))
        probes_vs = [self.eos.vs_from_v_theta(1.0 / x[0], x[1]) for x in rho_theta]
        start = self.eos.energy_field()

        result: Dict[str, Any] = {"chains": {}}
        rows: List[Dict[str, Any]] = []
        codes: List[int] = []
        for name in names:
            try:
                chain = build_chain(name, self.eos, self.d, velocity, mass)
                report = run_chain(chain, start, probes_vs, self.threads)
            except ThermoCheckError as e:
                self.logger.error(f"❌ Chain {name} failed: {e}")
                result["chains"][name] = {"error": str(e), "exit_code": e.exit_code}
                codes.append(e.exit_code)
                continue
            result["chains"][name] = report.to_dict()
            rows.extend(report.rows())
            codes.append(0 if report.passed else 1)

        congruence = self._congruence(probes_vs, velocity)
        result["congruence"] = congruence
        if not congruence["passed"]:
            codes.append(1)

        code = max(codes, default=0)
        status = PASS if code == 0 else (VIOLATION if code == 1 else ERROR)
        return SuiteOutcome("chains", status, result, rows, code)

    def _congruence(self, probes_vs: List[np.ndarray], velocity: Sequence[float]) -> Dict[str, Any]:
        """Congruence residuals of the reciprocal and exchange Hessian formulas and the Legendre identity"""
        u_field = self.eos.energy_field()
        specific = add_kinetic(u_field, self.d, position=1)
        density = reciprocal(specific, 1, 1.0)
        s_of_u = entropy_field(self.eos, self.settings)
        dual = legendre_dual_energy(self.eos, self.settings)
        with_velocity = [np.concatenate([[x[0]], velocity, [x[1]]]) for x in probes_vs]

        reciprocal_res = ordered_map(
            lambda x: reciprocal_congruence_residual(specific, density, 1, x), with_velocity, self.threads
        )
        exchange_res = ordered_map(
            lambda x: exchange_congruence_residual(u_field, s_of_u, 2, x), probes_vs, self.threads
        )
        identity_res = ordered_map(lambda x: hessian_identity_residual(u_field, dual, x), probes_vs, self.threads)

        tol = self.tolerances["congruence"]
        worst = {
            "reciprocal": max(reciprocal_res, default=0.0),
            "exchange": max(exchange_res, default=0.0),
            "legendre_identity": max(identity_res, default=0.0),
        }
        passed = worst["reciprocal"] <= tol and worst["exchange"] <= tol and worst["legendre_identity"] <= IDENTITY_TOLERANCE
        status = "✅" if passed else "❌"
        self.logger.info(f"{status} congruence residuals at {len(probes_vs)} probes: {worst}")
        return {
            "probe_count": len(probes_vs),
            "worst": worst,
            "tolerance": tol,
            "identity_tolerance": IDENTITY_TOLERANCE,
            "passed": passed,
        }

    def _run_euler_hessians(self) -> SuiteOutcome:
        eos, d = self.eos, self.d
        count = int(self.config_manager.get("sampler.count", 1000))
        domain = self._primitive_domain()
        S_field = entropy_density_conserved(eos, d, settings=self.settings)
        E_field = energy_density_field(eos, d)

        def to_conserved(x):
            return primitive_to_conserved(eos, *split_primitive(x)).array

        def to_density(x):
            return primitive_to_density_coords(eos, *split_primitive(x))

        entropy = region_sweep(
            S_field, self._primitive_sampler(count), domain, to_conserved, "negative", threads=self.threads
        )
        energy = region_sweep(
            E_field, self._primitive_sampler(count), domain, to_density, "positive", threads=self.threads
        )

        if len(entropy.verdicts) == len(energy.verdicts):
            duality = [
                i
                for i, (a, b) in enumerate(zip(entropy.verdicts, energy.verdicts))
                if (a.cls == DefinitenessClass.NEGATIVE_DEFINITE) != (b.cls == DefinitenessClass.POSITIVE_DEFINITE)
            ]
        else:
            duality = list(range(max(len(entropy.verdicts), len(energy.verdicts))))

        margin_ok = entropy.worst_margin > self.tolerances["min_margin"]

        n_route = self._count("route")
        states = entropy.probes[:n_route]
        routes = compare_entropy_routes(eos, d, states, self.threads, self.settings)
        routes.tolerance = self.tolerances["route"]

        kinetic = [kinetic_density_hessian(u[0], u[1:-1]) for u in states]
        kinetic_verdicts = [classify_hessian(k.matrix) for k in kinetic]
        kinetic_bad = [
            i
            for i, (k, v) in enumerate(zip(kinetic, kinetic_verdicts))
            if v.cls != DefinitenessClass.POSITIVE_SEMI_DEFINITE
            or v.zero_count != 1
            or k.residual > KINETIC_FACTOR_TOLERANCE
        ]

        consistency = entropy_pair_consistency(eos, d, states, self.threads, entropy=S_field)
        consistency.tolerance = self.tolerances["consistency"]

        passed = (
            entropy.passed
            and energy.passed
            and not duality
            and margin_ok
            and routes.passed
            and not kinetic_bad
            and consistency.passed
        )
        status = "✅" if passed else "❌"
        self.logger.info(
            f"{status} Euler Hessians: {len(entropy.probes)} states, worst entropy margin "
            f"{entropy.worst_margin:.3e}, {len(duality)} duality mismatches"
        )
        result = {
            "entropy_density": entropy.to_dict(),
            "energy_density": energy.to_dict(),
            "duality_mismatches": duality,
            "min_margin": self.tolerances["min_margin"],
            "margin_passed": margin_ok,
            "routes": routes.to_dict(),
            "kinetic": {
                "state_count": len(kinetic),
                "worst_factor_residual": max((k.residual for k in kinetic), default=0.0),
                "failures": kinetic_bad,
                "passed": not kinetic_bad,
            },
            "consistency": consistency.to_dict(),
        }
        rows = entropy.rows("euler:entropy-density") + energy.rows("euler:energy-density")
        status_name, code = _passed_status(passed)
        return SuiteOutcome("euler-hessians", status_name, result, rows, code)

    def _run_symmetrizer(self) -> SuiteOutcome:
        eos, d = self.eos, self.d
        primitives = self._primitive_probes(self._count("symmetrizer"))
        states = [primitive_to_conserved(eos, *split_primitive(x)) for x in primitives]
        sweep = symmetrizer_sweep(eos, d, states, self.threads, self.settings)

        n_godunov = self._count("godunov")
        probes_vs = [eos.vs_from_v_theta(1.0 / x[0], x[-1]) for x in primitives[:n_godunov]]
        godunov = godunov_chain(eos, d, probes_vs, self._velocity(), self.threads, self.settings)
        godunov.tolerance = self.tolerances["godunov"]

        result = {"symmetric_form": sweep.to_dict(), "godunov": godunov.to_dict()}
        rows = [
            {
                "check": "symmetrizer:L_ww",
                "probe": i,
                "coords": ";".join(repr(float(c)) for c in s.state),
                "class": s.verdict.cls.value,
                "margin": s.verdict.margin,
                "min_eig": s.verdict.min_eig,
                "max_eig": s.verdict.max_eig,
            }
            for i, s in enumerate(sweep.systems)
        ]
        status, code = _passed_status(sweep.passed and godunov.passed)
        return SuiteOutcome("symmetrizer", status, result, rows, code)

    def _run_relative_energy(self) -> SuiteOutcome:
        eos, d = self.eos, self.d
        count = self._count("relative_energy")
        first = self._primitive_probes(count, seed_offset=1)
        if self.config_manager.get("sampler.kind") == "grid":
            second = first[1:] + first[:1]
        else:
            second = self._primitive_probes(count, seed_offset=2)
        E_field = energy_density_field(eos, d)
        a = [primitive_to_density_coords(eos, *split_primitive(x)) for x in first]
        b = [primitive_to_density_coords(eos, *split_primitive(x)) for x in second]
        pairs = [(u1, u2) for u1, u2 in zip(a, b) if not np.array_equal(u1, u2)]

        values = ordered_map(lambda p: relative_energy(None, d, p[0], p[1], E_field), pairs, self.threads)
        failures = [
            {"pair": i, "u1": pairs[i][0].tolist(), "u2": pairs[i][1].tolist(), "value": v}
            for i, v in enumerate(values)
            if not v > 0.0
        ]

        selves = a[: self._count("self_pairs")]

        def self_residual(u):
            return abs(relative_energy(None, d, u, u, E_field)) / max(abs(E_field.value(u)), np.finfo(float).tiny)

        self_values = ordered_map(self_residual, selves, self.threads)
        worst_self = max(self_values, default=0.0)

        passed = not failures and worst_self <= SELF_PAIR_TOLERANCE
        status = "✅" if passed else "❌"
        self.logger.info(
            f"{status} relative energy: {len(pairs)} pairs, min {min(values, default=float('nan')):.3e}, "
            f"worst self-pair {worst_self:.3e}"
        )
        result = {
            "pair_count": len(pairs),
            "min_value": min(values, default=float("nan")),
            "failures": failures,
            "self_pair_count": len(selves),
            "worst_self_pair": worst_self,
            "self_pair_tolerance": SELF_PAIR_TOLERANCE,
            "passed": passed,
        }
        rows = [
            {
                "check": "relative-energy",
                "probe": i,
                "coords": ";".join(repr(float(c)) for c in np.concatenate(p)),
                "class": "",
                "margin": v,
                "min_eig": float("nan"),
                "max_eig": float("nan"),
            }
            for i, (p, v) in enumerate(zip(pairs, values))
        ]
        status_name, code = _passed_status(passed)
        return SuiteOutcome("relative-energy", status_name, result, rows, code)

    # -- run --

    def run_suite(self, name: str) -> SuiteOutcome:
        self.logger.info(f"🔍 Running suite {name}")
        try:
            outcome = self.suites[name]()
        except ThermoCheckError as e:
            self.logger.error(f"❌ Suite {name} failed: {type(e).__name__}: {e}")
            return SuiteOutcome(name, ERROR, exit_code=e.exit_code, error=f"{type(e).__name__}: {e}")
        status = "✅" if outcome.status == PASS else "❌"
        self.logger.info(f"{status} Suite {name}: {outcome.status}")
        return outcome

    def run(self) -> RunResult:
        """Run every configured suite in order; one suite's failure does not stop the others"""
        if self.eos is None:
            self.build_eos()
        outcomes: Dict[str, SuiteOutcome] = {}
        timings: Dict[str, float] = {}
        for name in self.config_manager.get_suites():
            started = time.perf_counter()
            outcomes[name] = self.run_suite(name)
            timings[name] = time.perf_counter() - started

        exit_code = max((o.exit_code for o in outcomes.values()), default=0)
        summary = {
            "passed": exit_code == 0,
            "exit_code": exit_code,
            "violations": [n for n, o in outcomes.items() if o.status == VIOLATION],
            "errors": [n for n, o in outcomes.items() if o.status == ERROR],
        }
        report = {
            "schema": REPORT_SCHEMA,
            "version": __version__,
            "config_hash": self.config_manager.config_hash(),
            "config": self.config_manager.resolved(),
            "eos": {
                "family": self.eos.family,
                "params": self.eos.params_dict(),
                "reference": self.eos.reference.to_dict(),
            },
            "suites": {n: o.to_dict() for n, o in outcomes.items()},
            "summary": summary,
        }
        rows = [row for o in outcomes.values() for row in o.rows]
        return RunResult(report, rows, timings, exit_code)
