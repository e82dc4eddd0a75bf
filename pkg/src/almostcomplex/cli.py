"""Command-line driver.

Subcommands run built-in or configured scenarios and write either a human
summary or a JSON report.  Exit codes: 0 all checks pass, 1 any check
fails, 2 inconclusive or refused checks without failures, 3 configuration
error, 4 numerical abort.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path
from typing import List, Optional

import jsonschema
from jsonschema.exceptions import best_match
import numpy as np

from . import __version__
from . import scenarios as sc
from .acs import Coframe
from .constructions import TauSpec, torus_coframe, torus_embedding, torus_f
from .errors import (
    ConvergenceError, DegenerateCoframeError, EvaluationError, ParseError, PreconditionError, RegularityError,
)
from .exterior import FormField
from .jet import ScalarField
from .report import Report, config_hash, exit_code, load_schema
from .sampling import halton_box
from .surface import ParamSurface, periodic_grid

__all__ = ["main", "run", "ConfigError", "load_config"]

EXIT_CONFIG = 3
EXIT_NUMERIC = 4


class ConfigError(ValueError):
    """Unreadable, malformed or semantically invalid configuration."""


# -- configuration ---------------------------------------------------------------

def load_config(path) -> dict:
    """Read and schema-validate a scenario configuration."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(load_schema("config.schema.json"))
    err = best_match(validator.iter_errors(cfg))
    if err is not None:
        where = "/" + "/".join(str(p) for p in err.absolute_path)
        raise ConfigError(f"{path}: schema violation at {where}: {err.message}")
    return cfg


def _dim(cfg: dict, default: Optional[int] = None) -> int:
    if "ambient_dim" in cfg:
        return cfg["ambient_dim"]
    if default is None:
        raise ConfigError("ambient_dim is required for this command")
    return default


def build_coframe(cfg: dict, dim: int) -> Coframe:
    spec = cfg.get("coframe")
    if spec is None:
        raise ConfigError("coframe is required for this command")
    if spec == "standard":
        return Coframe.standard(dim // 2)
    if spec == "torus":
        if dim != 4:
            raise ConfigError("the torus coframe lives on R^4")
        return torus_coframe()
    if len(spec) != dim // 2:
        raise ConfigError(f"coframe needs {dim // 2} rows on R^{dim}, got {len(spec)}")
    for i, row in enumerate(spec):
        if len(row["dz"]) != dim // 2 or len(row["dzbar"]) != dim // 2:
            raise ConfigError(f"coframe row {i}: dz and dzbar need {dim // 2} entries each")
    return Coframe.from_rows(dim, spec, name="config")


def build_f(cfg: dict, dim: int) -> ScalarField:
    if "f" not in cfg:
        raise ConfigError("f is required for this command")
    re_part = ScalarField.coerce(cfg["f"]["re"], dim)
    im = cfg["f"].get("im")
    return re_part if im is None else re_part + ScalarField.coerce(im, dim) * 1j


def build_surface(cfg: dict, dim: int) -> ParamSurface:
    spec = cfg.get("surface", "torus")
    if spec == "torus":
        if dim != 4:
            raise ConfigError("the built-in torus surface lives in R^4")
        return torus_embedding()
    S = ParamSurface.from_expressions(spec["x_k"], name="config")
    if S.dim != dim:
        raise ConfigError(f"surface has {S.dim} coordinates, ambient_dim is {dim}")
    if S.periodicity_defect() > 1e-12:
        raise ConfigError("surface is not 2pi-periodic in both parameters")
    return S


def build_omega(cfg: dict, dim: int) -> FormField:
    if "omega" not in cfg:
        return sc.standard_omega(dim)
    coeffs = {}
    for key, expr in cfg["omega"].items():
        i, j = (int(s) for s in key.split(","))
        if not (1 <= i <= dim and 1 <= j <= dim) or i == j:
            raise ConfigError(f"omega key {key!r} is not a pair of distinct indices in 1..{dim}")
        coeffs[(i - 1, j - 1)] = expr
    return FormField.from_coefficients(dim, 2, coeffs)


def build_theta(cfg: dict, dim: int) -> Optional[FormField]:
    if "theta" not in cfg:
        return sc.standard_theta(dim) if "omega" not in cfg else None
    if len(cfg["theta"]) != dim:
        raise ConfigError(f"theta needs {dim} components")
    return FormField.one_form(dim, cfg["theta"])


# -- subcommands -------------------------------------------------------------------

def _tol(args, key: str, cfg: dict, default: float) -> float:
    if args.tol is not None:
        return args.tol
    return cfg.get("tolerances", {}).get(key, default)


def _grid(args, cfg: dict, default: int) -> int:
    if args.grid is not None:
        return args.grid
    return cfg.get("grid", default)


def cmd_verify_torus(args, report: Report) -> None:
    grid = args.grid or 16
    tol = args.tol
    report.add(sc.identity_block(1000, tol=tol or 1e-10))
    report.add(sc.criterio_block(torus_f(), torus_coframe(), sc.torus_grid_seeds(grid), tol=tol or 1e-9))
    report.add(sc.nijenhuis_witness_block())
    report.add(sc.pullback_block(grid, tol=tol or 1e-10))
    report.add(sc.structure_block(torus_coframe(), halton_box(1000, 4), tol=tol or 1e-10, seed=report.seed))
    report.add(sc.quaternion_block(grid))
    report.add(sc.certificate_block(torus_coframe(), torus_embedding(), sc.standard_omega(), sc.standard_theta()))
    report.add(sc.control_certificate_block())


def cmd_criterio(args, report: Report, cfg: dict) -> None:
    dim = _dim(cfg)
    f, C = build_f(cfg, dim), build_coframe(cfg, dim)
    if "seeds" in cfg:
        seeds = np.array(cfg["seeds"], float)
        if seeds.ndim != 2 or seeds.shape[1] != dim:
            raise ConfigError(f"seeds must be points of R^{dim}")
    elif "surface" in cfg:
        S = build_surface(cfg, dim)
        seeds = np.array([S.position(t) for t in periodic_grid(_grid(args, cfg, 16))])
    else:
        n = _grid(args, cfg, 16) ** 2
        seeds = halton_box(n, dim, cfg.get("box", 2.0))
    report.add(sc.criterio_block(f, C, seeds, tol=_tol(args, "criterio", cfg, 1e-9)))
    if "structure" in cfg.get("checks", []):
        report.add(sc.structure_block(C, seeds, tol=_tol(args, "structure", cfg, 1e-10), seed=report.seed))


def cmd_jlambda(args, report: Report, cfg: dict) -> None:
    if "tau" not in cfg:
        raise ConfigError("tau is required for jlambda")
    try:
        t = TauSpec.from_dict(cfg["tau"])
    except ValueError as exc:
        if isinstance(exc, (ParseError, PreconditionError)):
            raise
        raise ConfigError(f"/tau: {exc}") from exc
    if "ambient_dim" in cfg and cfg["ambient_dim"] != 4 * t.n:
        raise ConfigError(f"ambient_dim must be {4 * t.n} for a TauSpec with n = {t.n}")
    grid = args.grid if args.grid is not None else cfg.get("grid")
    for block in sc.jlambda_blocks(t, "jlambda", grid=grid, tol=_tol(args, "pullback", cfg, 1e-9),
                                   seed=report.seed):
        report.add(block)


def cmd_tame(args, report: Report, cfg: dict) -> None:
    dim = _dim(cfg, 4)
    C, S = build_coframe(cfg, dim), build_surface(cfg, dim)
    omega, theta = build_omega(cfg, dim), build_theta(cfg, dim)
    N = _grid(args, cfg, 32)
    report.add(sc.certificate_block(C, S, omega, theta, N=N))
    if "stokes" in cfg.get("checks", []) and theta is not None:
        report.add(sc.stokes_block(theta, S, N, tol=_tol(args, "stokes", cfg, 1e-8)))


def cmd_nijenhuis(args, report: Report, cfg: dict) -> None:
    dim = _dim(cfg)
    C = build_coframe(cfg, dim)
    n = args.points
    if n < 1:
        raise ConfigError("--points must be positive")
    pts = np.array(cfg["seeds"], float) if "seeds" in cfg else halton_box(n, dim, cfg.get("box", 2.0))
    report.add(sc.nijenhuis_sweep_block(C, pts[:n], tol=_tol(args, "structure", cfg, 1e-6)))


def cmd_octonion(args, report: Report) -> None:
    for block in sc.octonion_blocks(seed=report.seed, n_sphere=args.grid or 500):
        report.add(block)


# -- driver ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--grid", type=int, metavar="N", help="grid size per parameter")
    common.add_argument("--tol", type=float, metavar="X", help="override the main tolerance")
    common.add_argument("--json", action="store_true", help="emit the machine-readable JSON report")
    common.add_argument("--timestamp", action="store_true",
                        help="record the wall-clock time in the report (breaks byte-identical reruns)")

    parser = argparse.ArgumentParser(prog="almostcomplex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-torus", parents=[common], help="the torus example on R^4, end to end")
    for name, text in (("criterio", "zero-set criterion for a user f and coframe"),
                       ("jlambda", "build J_Lambda from a TauSpec and verify the pullback identity"),
                       ("tame", "non-tameability certificate for a candidate 2-form")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--config", required=True, metavar="FILE")
    sub.add_parser("octonion", parents=[common], help="octonion table audit, S^6, CP^1 and pushforward")
    p = sub.add_parser("nijenhuis", parents=[common], help="Nijenhuis tensor sweep for a configured coframe")
    p.add_argument("--config", required=True, metavar="FILE")
    p.add_argument("--points", type=int, default=100, metavar="N")
    return parser


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0

    try:
        cfg = load_config(args.config) if getattr(args, "config", None) else {}
        seed = cfg.get("seed", 0)
        effective = {"command": args.command, "config": cfg, "grid": args.grid, "tol": args.tol,
                     "points": getattr(args, "points", None), "version": __version__}
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if args.timestamp else None
        report = Report(args.command, config_hash(effective), seed=seed, timestamp=stamp)
        handler = {
            "verify-torus": lambda: cmd_verify_torus(args, report),
            "criterio": lambda: cmd_criterio(args, report, cfg),
            "jlambda": lambda: cmd_jlambda(args, report, cfg),
            "tame": lambda: cmd_tame(args, report, cfg),
            "nijenhuis": lambda: cmd_nijenhuis(args, report, cfg),
            "octonion": lambda: cmd_octonion(args, report),
        }[args.command]
        with np.errstate(all="ignore"):
            handler()
    except (ConfigError, ParseError) as exc:
        print(f"almostcomplex: config error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (DegenerateCoframeError, ConvergenceError, RegularityError, EvaluationError, PreconditionError,
            np.linalg.LinAlgError) as exc:
        print(f"almostcomplex: numerical abort: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERIC

    text = report.to_json() if args.json else report.to_text()
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"almostcomplex: cannot write {args.out}: {exc}", file=stderr)
            return EXIT_CONFIG
    else:
        stdout.write(text)
    code = exit_code(report)
    for check in report.checks:
        if check.verdict != "pass":
            print(f"almostcomplex: {check.name}: {check.verdict}", file=stderr)
    return code


def main() -> int:
    try:
        return run()
    except BrokenPipeError:
        # the reader went away (e.g. piped into head); not an error of ours
        sys.stderr.close()
        return 0
