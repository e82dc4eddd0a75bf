"""Report assembly, JSON serialisation and the human-readable summary."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import List, Optional

import numpy as np

from . import __version__

__all__ = ["VERDICTS", "Check", "Report", "config_hash", "load_schema", "exit_code", "to_jsonable"]

VERDICTS = ("pass", "fail", "inconclusive", "refused")
SCHEMA_ID = "almostcomplex/report/v1"


def load_schema(name: str) -> dict:
    return json.loads(resources.files("almostcomplex.schemas").joinpath(name).read_text("utf-8"))


def to_jsonable(x):
    """Convert numpy scalars/arrays and complex numbers into JSON-friendly values."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, float) and not np.isfinite(x):
        return None
    return x


def config_hash(payload) -> str:
    text = json.dumps(to_jsonable(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class Check:
    name: str
    verdict: str
    inputs: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    certificate: Optional[dict] = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict {self.verdict!r} not in {VERDICTS}")


@dataclass
class Report:
    command: str
    config_hash: str
    seed: int = 0
    timestamp: Optional[str] = None
    checks: List[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def to_dict(self) -> dict:
        return to_jsonable({
            "metadata": {
                "tool": "almostcomplex",
                "version": __version__,
                "schema": SCHEMA_ID,
                "command": self.command,
                "config_hash": self.config_hash,
                "seed": self.seed,
                "timestamp": self.timestamp,
            },
            "checks": [
                {"name": c.name, "verdict": c.verdict, "inputs": c.inputs, "summary": c.summary, "rows": c.rows}
                for c in self.checks
            ],
            "certificates": [dict(check=c.name, **c.certificate) for c in self.checks if c.certificate],
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_text(self) -> str:
        lines = [f"almostcomplex {__version__} -- {self.command}", ""]
        for c in self.checks:
            lines.append(f"{'[' + c.verdict.upper() + ']':<14}{c.name}")
            for key, val in _flatten(c.summary):
                lines.append(f"    {key:<32} {_fmt(val)}")
            if c.certificate:
                lines.append(f"    certificate ({c.certificate['status']}):")
                for clause in c.certificate["clauses"]:
                    lines.append(f"      {clause}")
                lines.append(f"      => {c.certificate['text']}")
            lines.append("")
        lines.append(f"overall: exit code {exit_code(self)}")
        return "\n".join(lines) + "\n"


def _is_stats(val) -> bool:
    return isinstance(val, dict) and set(val) >= {"min", "max", "median"}


def _flatten(summary: dict, prefix: str = ""):
    for key, val in summary.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict) and not _is_stats(val):
            yield from _flatten(val, name + ".")
        else:
            yield name, val


def _fmt(val) -> str:
    if _is_stats(val):
        return f"min {val['min']:.3e}  max {val['max']:.3e}  median {val['median']:.3e}"
    if isinstance(val, float):
        return f"{val:.6e}"
    if isinstance(val, complex):
        return f"{val.real:.6e}{val.imag:+.6e}i"
    if isinstance(val, (list, tuple)) and len(val) == 2 and all(isinstance(v, float) for v in val):
        return f"{val[0]:.6e}{val[1]:+.6e}i"
    return str(val)


def exit_code(report: Report) -> int:
    verdicts = {c.verdict for c in report.checks}
    if "fail" in verdicts:
        return 1
    if verdicts & {"inconclusive", "refused"}:
        return 2
    return 0


def stats(values) -> dict:
    v = np.asarray(values, float)
    if v.size == 0:
        return {"min": float("nan"), "max": float("nan"), "median": float("nan")}
    return {"min": float(v.min()), "max": float(v.max()), "median": float(np.median(v))}
