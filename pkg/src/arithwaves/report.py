"""Run configuration and report serialization shared by all CLI commands.

Reports embed the full configuration (including the seed, even when it came
from the environment) and the artifact version, so every output document is
self-describing and reproducible.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    work_limit: int = 10**8
    json_path: str | None = None
    csv_path: str | None = None
    fig_path: str | None = None


@dataclass
class Report:
    config: RunConfig
    results: dict = field(default_factory=dict)
    timing: float = 0.0
    warnings: list[str] = field(default_factory=list)
    version: str = __version__


def _sanitize(obj: Any, warnings: list[str], path: str = "") -> Any:
    """Convert to JSON-safe types; non-finite numerics become warnings."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v, warnings, f"{path}.{k}") for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v, warnings, f"{path}[{i}]") for i, v in enumerate(obj)]
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist(), warnings, path)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if not math.isfinite(v):
            warnings.append(f"non-finite value at {path or 'root'}: {v}")
            return None
        return v
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _sanitize(dataclasses.asdict(obj), warnings, path)
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    return repr(obj)


def finalize(config: RunConfig, results: dict, started: float) -> Report:
    report = Report(config=config, timing=time.perf_counter() - started)
    report.results = _sanitize(results, report.warnings)
    return report


def to_json(report: Report) -> str:
    warnings = list(report.warnings)
    doc = {
        "version": report.version,
        "config": _sanitize(report.config, warnings),
        "results": report.results,
        "timing_seconds": report.timing,
        "warnings": warnings,
    }
    return json.dumps(doc, indent=2, sort_keys=True)
