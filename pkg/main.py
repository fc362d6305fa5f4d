"""
ThermoCheck Main Application
Batch verification of thermodynamic convexity: check, eval and list verbs
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from src import __version__
from src.core.check_engine import CheckEngine
from src.core.config_manager import SUITES, ConfigManager
from src.core.errors import ConfigError, ThermoCheckError
from src.core.field_catalog import QUANTITIES, SHOW_CHOICES, evaluate_quantity
from src.eos.eos_factory import EOSFactory
from src.reports.report_writer import format_summary, write_reports
from src.transforms.catalog import CHAIN_DESCRIPTIONS
from src.utils.logger import setup_logging
from src.utils.parallel import resolve_threads

DEFAULT_CONFIG = "config/thermocheck.json"

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _format_number(x) -> str:
    return f"{x:.17g}"


def _format_value(value) -> str:
    if isinstance(value, list):
        if value and isinstance(value[0], list):
            return "\n".join("  " + "  ".join(_format_number(c) for c in row) for row in value)
        return "  ".join(_format_number(c) for c in value)
    return _format_number(value)


def parse_params(items: Optional[List[str]]) -> Dict[str, float]:
    """KEY=VALUE pairs with numeric values"""
    params: Dict[str, float] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--param {key} needs a number, got {value!r}")
    return params


class ThermoCheck:
    """Main ThermoCheck application"""

    def __init__(self, config_path: Optional[str] = None):
        self.config_manager = ConfigManager(config_path)
        self.logger = logging.getLogger(__name__)

    def setup_logging(self):
        setup_logging(self.config_manager.get_logging_config())

    def check(self, out_dir: Optional[str], threads: Optional[int], fmt: Optional[str]) -> int:
        """Run the configured suites and write reports"""
        if out_dir:
            self.config_manager.set("output.dir", out_dir)
        if fmt:
            self.config_manager.set("output.format", fmt)
        self.config_manager.validate()
        n_threads = resolve_threads(threads, self.config_manager.get("threads"))

        self.logger.info(f"🚀 ThermoCheck {__version__}: suites {self.config_manager.get_suites()}, {n_threads} thread(s)")
        engine = CheckEngine(self.config_manager, n_threads)
        engine.build_eos()
        result = engine.run()

        output = self.config_manager.get_output_config()
        write_reports(result.report, result.rows, result.timings, output["dir"], output["format"])
        print(format_summary(result.report, result.timings))
        return result.exit_code

    def evaluate(
        self,
        quantity: str,
        point: str,
        show: str,
        preset: Optional[str],
        family: Optional[str],
        params: Dict[str, float],
        dimension: Optional[int],
    ) -> int:
        """Print one named quantity at one point"""
        if preset:
            self.config_manager.apply_preset(preset)
        if family and family != self.config_manager.get("eos.family"):
            self.config_manager.set("eos", {"family": family, "params": {}, "reference": {}})
        for key, value in params.items():
            self.config_manager.set(f"eos.params.{key}", value)
        if dimension is not None:
            self.config_manager.set("dimension", dimension)
        self.config_manager.validate()

        eos_config = self.config_manager.get_eos_config()
        eos = EOSFactory.create_eos(eos_config["family"], eos_config["params"], eos_config.get("reference", {}))
        result = evaluate_quantity(quantity, eos, int(self.config_manager.get("dimension")), point, show)

        print(f"{result['quantity']}: {result['field']}")
        print(f"point: {_format_value(result['point'])}")
        for key in ("value", "gradient", "hessian", "hessian_eigenvalues"):
            if key in result:
                text = _format_value(result[key])
                print(f"{key}:\n{text}" if "\n" in text else f"{key}: {text}")
        return EXIT_PASS

    def list_catalog(self) -> int:
        """Print EOS families, chains, suites, quantities and presets in a fixed order"""
        print("EOS families:")
        for name in EOSFactory.families():
            print(f"  {name}")
        print("Chains:")
        for name, description in CHAIN_DESCRIPTIONS.items():
            print(f"  {name:<28} {description}")
        print("Suites:")
        for name in SUITES:
            print(f"  {name}")
        print("Quantities:")
        for name, q in QUANTITIES.items():
            print(f"  {name:<28} {q.description}")
        print("Presets:")
        for name, preset in sorted(self.config_manager.load_presets().items()):
            print(f"  {name:<28} {preset.get('description', '')}")
        return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermocheck", description="Thermodynamic convexity verification")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True)

    check = verbs.add_parser("check", help="run the configured check suites")
    check.add_argument("--config", default=DEFAULT_CONFIG, help="run configuration (JSON)")
    check.add_argument("--out", help="report directory")
    check.add_argument("--threads", type=int, help="probe threads")
    check.add_argument("--format", choices=["json", "csv", "both"], help="report formats")

    evaluate = verbs.add_parser("eval", help="evaluate a named quantity at a point")
    evaluate.add_argument("quantity", help="quantity name (see list)")
    evaluate.add_argument("--config", help="run configuration supplying the EOS")
    evaluate.add_argument("--preset", help="preset supplying the EOS")
    evaluate.add_argument("--family", help="EOS family")
    evaluate.add_argument("--param", action="append", metavar="KEY=VALUE", help="EOS parameter override")
    evaluate.add_argument("--dimension", type=int, help="space dimension for density quantities")
    evaluate.add_argument("--point", default="reference", help="'reference' or comma-separated coordinates")
    evaluate.add_argument("--show", choices=SHOW_CHOICES, default="all")

    listing = verbs.add_parser("list", help="list families, chains, suites, quantities and presets")
    listing.add_argument("--config", help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    try:
        app = ThermoCheck(args.config)
        app.setup_logging()
        if args.verb == "check":
            return app.check(args.out, args.threads, args.format)
        if args.verb == "eval":
            return app.evaluate(
                args.quantity,
                args.point,
                args.show,
                args.preset,
                args.family,
                parse_params(args.param),
                args.dimension,
            )
        return app.list_catalog()
    except ThermoCheckError as e:
        logging.getLogger(__name__).error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError, KeyError, TypeError) as e:
        logging.getLogger(__name__).error(f"❌ Unexpected failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
