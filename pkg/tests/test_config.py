"""Tests for the run configuration manager"""

import json

import pytest

from src.core.config_manager import DEFAULT_TOLERANCES, ConfigManager
from src.core.errors import ConfigError


@pytest.fixture
def manager():
    return ConfigManager()


def _write(tmp_path, data, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# -- defaults and validation --


def test_defaults_validate(manager):
    manager.validate()
    assert manager.get("eos.family") == "polytropic"
    assert manager.get_tolerances() == DEFAULT_TOLERANCES


def test_default_box_allows_fast_flow(manager):
    assert manager.get("region") == {"rho": [0.1, 10.0], "theta": [50.0, 1000.0], "velocity": [-3.0, 3.0]}
    manager.apply_preset("polytropic-desk")
    assert manager.get("region.velocity") == [-3.0, 3.0]


def test_random_sampler_needs_seed(manager):
    manager.set("sampler.seed", None)
    with pytest.raises(ConfigError):
        manager.validate()


def test_grid_sampler_needs_resolution(manager):
    manager.set("sampler", {"kind": "grid", "resolution": 1})
    with pytest.raises(ConfigError):
        manager.validate()
    manager.set("sampler.resolution", 4)
    manager.validate()


@pytest.mark.parametrize(
    "key, value",
    [
        ("dimension", 4),
        ("suites", ["stability", "acoustics"]),
        ("region.rho", [2.0, 1.0]),
        ("region.theta", [-1.0, 10.0]),
        ("output.format", "xml"),
        ("eos.family", "stiffened"),
        ("tolerances.gibbs", 1e-3),
        ("tolerances.unknown", 1e-9),
    ],
)
def test_invalid_settings_are_rejected(manager, key, value):
    manager.set(key, value)
    with pytest.raises(ConfigError):
        manager.validate()


def test_tolerances_may_tighten_or_loosen_up_to_limit(manager):
    manager.set("tolerances.gibbs", 1e-14)
    manager.set("tolerances.godunov", 1e-6)
    manager.validate()
    assert manager.get_solver_config()["tolerance"] == DEFAULT_TOLERANCES["solver"]


# -- presets and files --


def test_preset_replaces_eos(manager):
    manager.apply_preset("tait-water")
    assert manager.get("eos.family") == "tait"
    assert "R" not in manager.get("eos.params")
    assert manager.get("preset") == "tait-water"
    manager.validate()


def test_unknown_preset(manager):
    with pytest.raises(ConfigError):
        manager.apply_preset("argon")


def test_load_config_applies_preset_then_overrides(tmp_path):
    path = _write(tmp_path, {"preset": "vdw-desk", "sampler": {"count": 12}, "dimension": 2})
    manager = ConfigManager(path)
    assert manager.get("eos.family") == "vdw"
    assert manager.get("sampler.count") == 12
    assert manager.get("sampler.seed") == 20240601
    assert manager.get("dimension") == 2


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        ConfigManager(str(tmp_path / "absent.json"))


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        ConfigManager(str(path))


def test_save_and_reload(tmp_path, manager):
    manager.set("counts.chains", 7)
    path = str(tmp_path / "saved.json")
    manager.save_config(path)
    assert ConfigManager(path).get("counts.chains") == 7


# -- dot access and hashing --


def test_dot_notation(manager):
    assert manager.get("region.theta") == [50.0, 1000.0]
    assert manager.get("region.pressure", "missing") == "missing"
    manager.set("chains.mass", 3.0)
    assert manager.get("chains.mass") == 3.0


def test_hash_ignores_threads_and_output(manager):
    before = manager.config_hash()
    manager.set("threads", 8)
    manager.set("output.dir", "elsewhere")
    manager.set("logging.level", "DEBUG")
    assert manager.config_hash() == before


def test_hash_tracks_results_relevant_keys(manager):
    before = manager.config_hash()
    manager.set("sampler.seed", 1)
    assert manager.config_hash() != before


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
