"""Tests for the thermocheck command line: check, eval and list"""

import json
import logging
import math

import pandas as pd
import pytest

from main import main, parse_params
from src.core.errors import ConfigError
from src.reports.report_writer import dumps_report, sanitize
from src.utils.logger import LEVEL_ENV, setup_logging
from src.utils.parallel import THREADS_ENV, ordered_map, resolve_threads

UNIT_GAS = {
    "family": "polytropic",
    "params": {"R": 1.0, "gamma": 1.4},
    "reference": {"v": 1.0, "s": 0.0, "u": 2.5},
}
SMALL_COUNTS = {
    "stability": 6,
    "chains": 4,
    "route": 3,
    "symmetrizer": 3,
    "godunov": 2,
    "relative_energy": 6,
    "self_pairs": 3,
}


@pytest.fixture
def write_config(tmp_path):
    def write(data, name="run.json"):
        config = {"logging": {"level": "WARNING", "file": None}, **data}
        path = tmp_path / name
        path.write_text(json.dumps(config), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def small_run(write_config, tmp_path):
    """Every suite on the unit polytropic gas with a handful of probes"""
    return write_config(
        {
            "eos": UNIT_GAS,
            "dimension": 1,
            "region": {"rho": [0.5, 2.0], "theta": [0.5, 2.0], "velocity": [-0.5, 0.5]},
            "sampler": {"kind": "random", "count": 6, "seed": 11},
            "counts": SMALL_COUNTS,
            "output": {"dir": str(tmp_path / "reports"), "format": "both"},
        }
    )


def _line_value(out: str, key: str) -> str:
    for line in out.splitlines():
        if line.startswith(f"{key}:"):
            return line.split(":", 1)[1].strip()
    raise AssertionError(f"{key} not printed:\n{out}")


# -- list --


def test_list_names_families_and_chains(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("polytropic", "vdw", "tait", "godunov", "entropy-density-exchange", "relative-energy"):
        assert name in out
    assert "tait-water" in out


def test_list_is_stable(capsys):
    main(["list"])
    first = capsys.readouterr().out
    main(["list"])
    assert capsys.readouterr().out == first


# -- eval --


def test_eval_ideal_pressure(capsys):
    code = main(
        ["eval", "p", "--family", "polytropic", "--param", "R=4", "--param", "gamma=1.4", "--point", "2,3", "--show", "value"]
    )
    assert code == 0
    assert float(_line_value(capsys.readouterr().out, "value")) == pytest.approx(24.0)


def test_eval_tait_reference_temperature(capsys):
    assert main(["eval", "theta", "--preset", "tait-water", "--show", "value"]) == 0
    assert float(_line_value(capsys.readouterr().out, "value")) == pytest.approx(293.15)


def test_eval_entropy_density_is_concave(capsys):
    assert main(["eval", "entropy-density", "--show", "hessian-eigenvalues"]) == 0
    eigenvalues = [float(x) for x in _line_value(capsys.readouterr().out, "hessian_eigenvalues").split()]
    assert len(eigenvalues) == 5
    assert all(lam < 0 for lam in eigenvalues)


def test_eval_unknown_quantity_is_usage_error(capsys):
    assert main(["eval", "enthalpy"]) == 2


def test_eval_outside_domain_is_numerical_error(capsys):
    assert main(["eval", "p", "--point", "-1,3"]) == 3


def test_eval_wrong_point_length(capsys):
    assert main(["eval", "u", "--point", "1,2,3"]) == 2


def test_parse_params():
    assert parse_params(["R=4", " gamma = 1.4"]) == {"R": 4.0, "gamma": 1.4}
    with pytest.raises(ConfigError):
        parse_params(["R"])
    with pytest.raises(ConfigError):
        parse_params(["R=four"])


# -- check --


def test_check_without_seed_is_usage_error(write_config, tmp_path):
    path = write_config({"sampler": {"kind": "random", "count": 5, "seed": None}, "output": {"dir": str(tmp_path)}})
    assert main(["check", "--config", path]) == 2


def test_check_missing_config_is_usage_error(tmp_path):
    assert main(["check", "--config", str(tmp_path / "absent.json")]) == 2


def test_check_unstable_tait_reports_violation(write_config, tmp_path):
    out = tmp_path / "tait"
    path = write_config(
        {
            "preset": "tait-unstable",
            "sampler": {"kind": "random", "count": 5, "seed": 3},
            "counts": {"stability": 5},
            "output": {"dir": str(out), "format": "json"},
        }
    )
    assert main(["check", "--config", path]) == 1
    text = (out / "report.json").read_text(encoding="utf-8")
    assert "U_SS = 1/C" in text
    report = json.loads(text)
    assert report["summary"]["violations"] == ["stability"]
    assert report["suites"]["stability"]["result"]["energy"]["verdict"] == "violated"


def test_small_run_passes(small_run, tmp_path, capsys):
    assert main(["check", "--config", small_run]) == 0
    assert "Result: PASS" in capsys.readouterr().out
    report = json.loads((tmp_path / "reports" / "report.json").read_text(encoding="utf-8"))
    assert report["schema"] == "report/v1"
    assert list(report["suites"]) == ["stability", "chains", "euler-hessians", "symmetrizer", "relative-energy"]
    assert all(suite["status"] == "pass" for suite in report["suites"].values())
    probes = pd.read_csv(tmp_path / "reports" / "probes.csv")
    assert list(probes.columns) == ["check", "probe", "coords", "class", "margin", "min_eig", "max_eig"]
    assert (tmp_path / "reports" / "timings.json").exists()


def test_default_box_euler_suites_pass(write_config, tmp_path):
    out = tmp_path / "desk"
    path = write_config(
        {
            "preset": "polytropic-desk",
            "dimension": 3,
            "sampler": {"kind": "random", "count": 12, "seed": 7},
            "suites": ["euler-hessians", "symmetrizer"],
            "counts": {"symmetrizer": 6, "route": 4},
            "output": {"dir": str(out), "format": "json"},
        }
    )
    assert main(["check", "--config", path]) == 0
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report["config"]["region"]["velocity"] == [-3.0, 3.0]
    assert all(suite["status"] == "pass" for suite in report["suites"].values())


def test_report_is_byte_identical_across_runs(write_config, tmp_path):
    out = tmp_path / "repeat"
    path = write_config(
        {
            "eos": UNIT_GAS,
            "dimension": 2,
            "region": {"rho": [0.5, 2.0], "theta": [0.5, 2.0], "velocity": [-0.5, 0.5]},
            "sampler": {"kind": "random", "count": 5, "seed": 5},
            "suites": ["stability", "relative-energy"],
            "counts": SMALL_COUNTS,
            "output": {"dir": str(out), "format": "json"},
        }
    )
    assert main(["check", "--config", path]) == 0
    first = (out / "report.json").read_bytes()
    assert main(["check", "--config", path, "--threads", "3"]) == 0
    assert (out / "report.json").read_bytes() == first


# -- reports and threads --


def test_sanitize_replaces_non_finite_floats():
    data = sanitize({"a": float("nan"), "b": [math.inf, -math.inf], "c": 1.5})
    assert data == {"a": "nan", "b": ["inf", "-inf"], "c": 1.5}
    assert dumps_report({"b": 1, "a": float("nan")}) == '{\n  "a": "nan",\n  "b": 1\n}\n'


def test_threads_resolution(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(None, None) == 1
    assert resolve_threads(None, 4) == 4
    monkeypatch.setenv(THREADS_ENV, "2")
    assert resolve_threads(None, 4) == 2
    assert resolve_threads(6, 4) == 6
    with pytest.raises(ConfigError):
        resolve_threads(0)


def test_ordered_map_keeps_order():
    assert ordered_map(lambda x: x * x, range(10), threads=4) == [x * x for x in range(10)]


def test_logging_level_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(LEVEL_ENV, "debug")
    log_file = tmp_path / "logs" / "run.log"
    assert setup_logging({"level": "WARNING", "file": str(log_file)}) == logging.DEBUG
    assert log_file.parent.is_dir()
    monkeypatch.delenv(LEVEL_ENV)
    assert setup_logging({"level": "WARNING", "file": None}) == logging.WARNING


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
