"""
ThermoCheck Report Writer
Saves run reports as JSON, per-probe tables as CSV, and prints the console summary
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from src.utils.logger import get_logger

logger = get_logger(__name__)

REPORT_FILE = "report.json"
PROBES_FILE = "probes.csv"
TIMINGS_FILE = "timings.json"
PROBE_COLUMNS = ["check", "probe", "coords", "class", "margin", "min_eig", "max_eig"]


def sanitize(value: Any) -> Any:
    """JSON-safe copy: numpy scalars become Python numbers, non-finite floats become strings"""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, np.ndarray):
        return sanitize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def dumps_report(report: Dict[str, Any]) -> str:
    """Canonical report text: sorted keys, repr-precision floats, trailing newline"""
    return json.dumps(sanitize(report), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def probes_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=PROBE_COLUMNS)


def write_reports(
    report: Dict[str, Any],
    rows: List[Dict[str, Any]],
    timings: Dict[str, float],
    out_dir: str,
    fmt: str = "both",
) -> Dict[str, Path]:
    """Write report.json and/or probes.csv, always timings.json; returns the written paths"""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written: Dict[str, Path] = {}

    if fmt in ("json", "both"):
        path = directory / REPORT_FILE
        path.write_text(dumps_report(report), encoding="utf-8")
        written["report"] = path

    if fmt in ("csv", "both"):
        path = directory / PROBES_FILE
        probes_frame(rows).to_csv(path, index=False, float_format="%.17g")
        written["probes"] = path

    path = directory / TIMINGS_FILE
    path.write_text(json.dumps({k: round(v, 6) for k, v in timings.items()}, indent=2) + "\n", encoding="utf-8")
    written["timings"] = path

    for name, p in written.items():
        logger.info(f"📊 {name} saved to {p}")
    return written


def format_summary(report: Dict[str, Any], timings: Dict[str, float]) -> str:
    """One-screen human summary of a run report"""
    eos = report.get("eos", {})
    summary = report.get("summary", {})
    lines = [
        f"ThermoCheck {report.get('version', '')}  schema {report.get('schema', '')}",
        f"EOS: {eos.get('family', '?')} {eos.get('params', {})}",
        f"Config hash: {report.get('config_hash', '')[:16]}",
        "",
    ]
    glyphs = {"pass": "✅", "violation": "❌", "error": "⚠️"}
    for name, suite in report.get("suites", {}).items():
        status = suite.get("status", "?")
        line = f"  {glyphs.get(status, '?')} {name:<16} {status:<10} {timings.get(name, 0.0):8.2f}s"
        if suite.get("error"):
            line += f"  {suite['error']}"
        lines.append(line)
    lines.append("")
    verdict = "PASS" if summary.get("passed") else "FAIL"
    lines.append(f"Result: {verdict} (exit code {summary.get('exit_code', '?')})")
    return "\n".join(lines)
