"""
ThermoCheck Configuration Manager
Run configuration: defaults, presets, JSON overrides and validation
"""

import copy
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.core.errors import ConfigError

PRESETS_FILE = Path(__file__).resolve().parent.parent.parent / "config" / "presets.json"

SUITES = ["stability", "chains", "euler-hessians", "symmetrizer", "relative-energy"]

# tolerance overrides may tighten these, and may loosen them only up to LOOSEST_TOLERANCE
DEFAULT_TOLERANCES = {
    "solver": 1e-12,
    "gibbs": 1e-12,
    "maxwell": 1e-10,
    "congruence": 1e-10,
    "route": 1e-9,
    "consistency": 1e-9,
    "godunov": 1e-8,
    "min_margin": 1e-6,
}
LOOSEST_TOLERANCE = 1e-6

# keys that do not change results and stay out of the config hash
_UNHASHED = ("threads", "output", "logging")


class ConfigManager:
    """Central configuration management for ThermoCheck runs"""

    def __init__(self, config_path: Optional[str] = None, presets_path: Optional[str] = None):
        self.presets_path = Path(presets_path) if presets_path else PRESETS_FILE
        self.config: Dict[str, Any] = {}
        self.load_default_config()
        if config_path:
            self.load_config(config_path)

    def load_default_config(self):
        """Load default configuration"""
        self.config = {
            "preset": None,
            "eos": {
                "family": "polytropic",
                "params": {"R": 0.004, "gamma": 1.4},
                "reference": {"v": 1.0, "s": 0.0, "u": 1.0},
            },
            "dimension": 3,
            "region": {"rho": [0.1, 10.0], "theta": [50.0, 1000.0], "velocity": [-3.0, 3.0]},
            "sampler": {"kind": "random", "count": 1000, "seed": 20240601},
            "suites": list(SUITES),
            "chains": {"names": None, "velocity": None, "mass": 2.0},
            "counts": {
                "stability": 200,
                "chains": 50,
                "route": 50,
                "symmetrizer": 50,
                "godunov": 20,
                "relative_energy": 1000,
                "self_pairs": 100,
            },
            "tolerances": dict(DEFAULT_TOLERANCES),
            "solver": {"max_iterations": 50, "bracket_step": 1.0, "max_expansions": 60, "cond_max": 1e13},
            "threads": None,
            "output": {"dir": "reports", "format": "both"},
            "logging": {
                "level": "INFO",
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                "file": None,
            },
        }

    def load_presets(self) -> Dict[str, Any]:
        try:
            with open(self.presets_path, "r", encoding="utf-8") as f:
                return json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Presets file not found: {self.presets_path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid presets file {self.presets_path}: {e}")

    def apply_preset(self, name: str):
        """Merge a named preset over the current configuration"""
        presets = self.load_presets()
        if name not in presets:
            raise ConfigError(f"Unknown preset: {name} (known: {', '.join(sorted(presets))})")
        preset = copy.deepcopy(presets[name])
        preset.pop("description", None)
        # a preset names a complete EOS; do not keep parameters of the default family
        if "eos" in preset:
            self.config["eos"] = {"family": None, "params": {}, "reference": {}}
        self._merge_config(self.config, preset)
        self.config["preset"] = name

    def load_config(self, config_path: str) -> bool:
        """Load a JSON run configuration; its preset (if any) is applied first"""
        path = Path(config_path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                file_config = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in {path}: {e}")
        if not isinstance(file_config, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
        preset = file_config.pop("preset", None)
        if preset:
            self.apply_preset(preset)
        self._merge_config(self.config, file_config)
        return True

    def save_config(self, config_path: str) -> bool:
        """Save current configuration to file"""
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(self.config, f, indent=2, sort_keys=True)
        return True

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key (dot notation supported)"""
        value: Any = self.config
        for k in key.split("."):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def set(self, key: str, value: Any):
        """Set configuration value by key (dot notation supported)"""
        keys = key.split(".")
        config = self.config
        for k in keys[:-1]:
            if k not in config or not isinstance(config[k], dict):
                config[k] = {}
            config = config[k]
        config[keys[-1]] = value

    def get_eos_config(self) -> Dict[str, Any]:
        return self.get("eos", {})

    def get_sampler_config(self) -> Dict[str, Any]:
        return self.get("sampler", {})

    def get_region_config(self) -> Dict[str, Any]:
        return self.get("region", {})

    def get_tolerances(self) -> Dict[str, float]:
        return {**DEFAULT_TOLERANCES, **self.get("tolerances", {})}

    def get_solver_config(self) -> Dict[str, Any]:
        return {**self.get("solver", {}), "tolerance": self.get_tolerances()["solver"]}

    def get_output_config(self) -> Dict[str, Any]:
        return self.get("output", {})

    def get_logging_config(self) -> Dict[str, Any]:
        return self.get("logging", {})

    def get_suites(self) -> List[str]:
        return list(self.get("suites", []))

    def validate(self):
        """Enforce the run configuration rules; raises ConfigError"""
        from src.eos.eos_factory import EOSFactory

        family = self.get("eos.family")
        if family not in EOSFactory.families():
            raise ConfigError(f"Unknown EOS family: {family}")
        if not isinstance(self.get("eos.params"), dict):
            raise ConfigError("eos.params must be an object")

        d = self.get("dimension")
        if d not in (1, 2, 3):
            raise ConfigError(f"dimension must be 1, 2 or 3, got {d}")

        sampler = self.get_sampler_config()
        kind = sampler.get("kind")
        if kind == "random":
            if "seed" not in sampler or sampler["seed"] is None:
                raise ConfigError("Random sampler needs a seed")
            if not isinstance(sampler.get("count"), int) or sampler["count"] < 1:
                raise ConfigError("Random sampler needs an integer count >= 1")
        elif kind == "grid":
            if not isinstance(sampler.get("resolution"), int) or sampler["resolution"] < 2:
                raise ConfigError("Grid sampler needs an integer resolution >= 2")
        else:
            raise ConfigError(f"Unknown sampler kind: {kind}")

        region = self.get_region_config()
        for key in ("rho", "theta", "velocity"):
            bounds = region.get(key)
            if not (isinstance(bounds, list) and len(bounds) == 2 and bounds[0] < bounds[1]):
                raise ConfigError(f"region.{key} must be [lower, upper] with lower < upper")
        if region["rho"][0] <= 0 or region["theta"][0] <= 0:
            raise ConfigError("region.rho and region.theta must be positive")

        unknown = [s for s in self.get_suites() if s not in SUITES]
        if unknown:
            raise ConfigError(f"Unknown suites: {unknown} (known: {', '.join(SUITES)})")

        for name, value in self.get("tolerances", {}).items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"Unknown tolerance: {name}")
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"Tolerance {name} must be positive, got {value}")
            if value > DEFAULT_TOLERANCES[name] and value > LOOSEST_TOLERANCE:
                raise ConfigError(
                    f"Tolerance {name}={value} loosens the default {DEFAULT_TOLERANCES[name]} beyond {LOOSEST_TOLERANCE}"
                )

        fmt = self.get("output.format")
        if fmt not in ("json", "csv", "both"):
            raise ConfigError(f"output.format must be json, csv or both, got {fmt}")

    def resolved(self) -> Dict[str, Any]:
        """Config echo with defaults filled in"""
        data = copy.deepcopy(self.config)
        data["tolerances"] = self.get_tolerances()
        return data

    def config_hash(self) -> str:
        data = {k: v for k, v in self.resolved().items() if k not in _UNHASHED}
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _merge_config(self, base: Dict, override: Dict):
        """Recursively merge configuration dictionaries"""
        for key, value in override.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._merge_config(base[key], value)
            else:
                base[key] = copy.deepcopy(value)
