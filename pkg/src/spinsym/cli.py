"""Command-line front end for the verification engine.

Four subcommands: ``lie`` runs the structure-constant suite for one
algebra, ``model`` runs the check suite for one model instance,
``solve-lambda`` solves for the couplings that conserve the level-1
generators, and ``dump-tables`` emits the structure constants and metric
as deterministic JSON for external diffing.

Exit codes: 0 all executed checks passed, 1 at least one check failed
or errored, 2 invalid configuration.
"""

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .checks import (MODEL_CHECK_NAMES, CheckReport, check_lambda_solver,
                     run_lie_suite, run_model_suite, solve_lambda)
from .lie import AlgebraSpec, basis, metric, structure_row
from .models import MODEL_KINDS, ModelSpec
from .operators import set_term_ceiling
from .version import __version__

JOBS_ENV = "SPINSYM_JOBS"
CEILING_ENV = "SPINSYM_TERM_CEILING"

Coupling = Union[str, Fraction]


class ConfigError(Exception):
    """Rejected run configuration; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Normalized command-line request."""

    subcommand: str
    N: int
    theta0: int
    L: int = 0
    model: str = ""
    lam: Coupling = "star"
    omega: Coupling = "symbolic"
    checks: Optional[Tuple[str, ...]] = None
    format: str = "text"
    jobs: int = 1
    seed: int = 1
    term_ceiling: Optional[int] = None


def _parse_theta0(text: str) -> int:
    if text in ("+1", "1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError("theta0 must be +1 or -1")


_RATIONAL_SHAPE = re.compile(r"[+-]?\d+(/[1-9]\d*)?\Z")


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL_SHAPE.match(text):
        raise argparse.ArgumentTypeError(
            f"expected an exact rational like 5, -2 or 1/3, got {text!r}")
    return Fraction(text)


def _parse_coupling(text: str) -> Coupling:
    if text in ("star", "symbolic"):
        return text
    return _parse_rational(text)


def _parse_trap(text: str) -> Coupling:
    if text == "symbolic":
        return text
    return _parse_rational(text)


def _parse_checks(text: str) -> Tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    if not names:
        raise argparse.ArgumentTypeError("empty check list")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinsym",
        description="Exact symbolic verification of the symmetry algebras "
                    "of spin Calogero, Sutherland and confined models.")
    parser.add_argument("--version", action="version",
                        version=f"spinsym {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_algebra(p: argparse.ArgumentParser) -> None:
        p.add_argument("--N", type=int, required=True, metavar="N",
                       help="size of the defining representation")
        p.add_argument("--theta0", type=_parse_theta0, required=True,
                       metavar="{+1,-1}", help="+1 for so(N), -1 for sp(N)")

    def add_output(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--jobs", type=int, default=None,
                       help=f"worker threads (default: ${JOBS_ENV} or 1)")
        p.add_argument("--term-ceiling", type=int, default=None,
                       help="abort any operator that grows past this many "
                            f"terms (default: ${CEILING_ENV} or built-in)")

    def add_model(p: argparse.ArgumentParser) -> None:
        p.add_argument("--model", choices=MODEL_KINDS, required=True)
        p.add_argument("--L", type=int, required=True, metavar="L",
                       help="number of sites")
        p.add_argument("--omega", type=_parse_trap, default="symbolic",
                       metavar="OMEGA",
                       help="trap strength: symbolic or an exact rational "
                            "(confined model only)")

    lie = sub.add_parser(
        "lie", help="structure constants, Jacobi, metric and coupling "
                    "weight for one algebra")
    add_algebra(lie)
    add_output(lie)

    model = sub.add_parser("model", help="run the model check suite")
    add_algebra(model)
    add_model(model)
    model.add_argument(
        "--lambda", dest="lam", type=_parse_coupling, default="star",
        metavar="LAMBDA",
        help="coupling: star (critical value), symbolic, or an exact "
             "rational; use --lambda=-1/3 for negative fractions")
    model.add_argument(
        "--checks", type=_parse_checks, default=None, metavar="LIST",
        help="comma-separated subset of: " + ", ".join(MODEL_CHECK_NAMES))
    model.add_argument("--seed", type=int, default=1,
                       help="seed for the evaluation oracle (default 1)")
    add_output(model)

    solve = sub.add_parser(
        "solve-lambda", help="solve for couplings that conserve the "
                             "level-1 generators")
    add_algebra(solve)
    add_model(solve)
    add_output(solve)

    dump = sub.add_parser(
        "dump-tables", help="emit structure constants and metric as a "
                            "deterministic table")
    add_algebra(dump)
    add_output(dump)
    return parser


def _int_env(name: str) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"environment variable {name} must be an "
                          f"integer, got {raw!r}")


def build_config(ns: argparse.Namespace) -> RunConfig:
    jobs = ns.jobs if ns.jobs is not None else (_int_env(JOBS_ENV) or 1)
    if jobs < 1:
        raise ConfigError("jobs must be at least 1")
    ceiling = ns.term_ceiling
    if ceiling is None:
        ceiling = _int_env(CEILING_ENV)
    if ceiling is not None and ceiling < 1:
        raise ConfigError("term ceiling must be positive")
    lam: Coupling = getattr(ns, "lam", "star")
    if ns.subcommand == "solve-lambda":
        lam = "symbolic"
    checks = getattr(ns, "checks", None)
    if checks:
        unknown = [c for c in checks if c not in MODEL_CHECK_NAMES]
        if unknown:
            raise ConfigError(
                f"unknown checks {unknown}; "
                f"available: {', '.join(MODEL_CHECK_NAMES)}")
    config = RunConfig(
        subcommand=ns.subcommand,
        N=ns.N,
        theta0=ns.theta0,
        L=getattr(ns, "L", 0),
        model=getattr(ns, "model", ""),
        lam=lam,
        omega=getattr(ns, "omega", "symbolic"),
        checks=checks,
        format=ns.format,
        jobs=jobs,
        seed=getattr(ns, "seed", 1),
        term_ceiling=ceiling,
    )
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    try:
        spec = AlgebraSpec(config.N, config.theta0)
    except ValueError as exc:
        raise ConfigError(str(exc))
    if config.lam == "star" and config.N == 4 * config.theta0:
        raise ConfigError(
            f"the critical coupling 2/(N - 4*theta0) is undefined for "
            f"{spec.describe()}: N = 4*theta0 makes it divide by zero and "
            f"the algebra non-simple; pass an explicit --lambda or "
            f"--lambda symbolic instead")
    if config.subcommand in ("model", "solve-lambda") and config.L < 1:
        raise ConfigError("L must be at least 1")


def _algebra(config: RunConfig) -> AlgebraSpec:
    return AlgebraSpec(config.N, config.theta0)


def _coupling_label(value: Coupling) -> str:
    return value if isinstance(value, str) else str(value)


def _spec_info(config: RunConfig) -> Dict[str, object]:
    info: Dict[str, object] = {
        "subcommand": config.subcommand,
        "algebra": _algebra(config).describe(),
        "N": config.N,
        "theta0": config.theta0,
    }
    if config.subcommand in ("model", "solve-lambda"):
        info["L"] = config.L
        info["model"] = config.model
        info["lambda"] = _coupling_label(config.lam)
        info["omega"] = _coupling_label(config.omega)
    if config.subcommand == "model":
        info["seed"] = config.seed
    return info


_ORACLE_BANNER = "\n".join([
    "!" * 74,
    "!! ORACLE DISAGREEMENT: a symbolically proven identity evaluated "
    "nonzero !!",
    "!! on a random test function.  The engine is inconsistent; no verdict "
    "  !!",
    "!! in this report can be trusted until the discrepancy is resolved.  "
    "  !!",
    "!" * 74,
])


def _emit(report: CheckReport, config: RunConfig,
          extra: Optional[Dict[str, object]] = None) -> int:
    if config.format == "json":
        payload = report.to_payload(_spec_info(config))
        if extra:
            tail = payload.pop("engine_version")
            payload.update(extra)
            payload["engine_version"] = tail
        print(json.dumps(payload, indent=2))
    else:
        print(report.to_text())
        if extra:
            for key, value in extra.items():
                print(f"{key}: {json.dumps(value)}")
    if report.oracle_alarm:
        print(_ORACLE_BANNER, file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_lie(config: RunConfig) -> int:
    report = run_lie_suite(_algebra(config), jobs=config.jobs)
    return _emit(report, config)


def _model_spec(config: RunConfig) -> ModelSpec:
    return ModelSpec(_algebra(config), sites=config.L, kind=config.model,
                     lam=config.lam, omega=config.omega)


def _cmd_model(config: RunConfig) -> int:
    ms = _model_spec(config)
    report = run_model_suite(ms, checks=config.checks, jobs=config.jobs,
                             seed=config.seed)
    return _emit(report, config)


def _cmd_solve(config: RunConfig) -> int:
    ms = _model_spec(config)
    report = CheckReport.build([check_lambda_solver(ms)])
    roots = [str(r) for r in sorted(solve_lambda(ms))]
    return _emit(report, config, extra={"lambda_roots": roots})


def _pair_key(ab: Tuple[int, int]) -> str:
    return f"{ab[0]},{ab[1]}"


def _dump_payload(spec: AlgebraSpec) -> Dict[str, object]:
    labels = sorted(basis(spec))
    g = metric(spec)
    constants: Dict[str, Dict[str, str]] = {}
    for ab in labels:
        for cd in labels:
            row = structure_row(spec, ab, cd)
            if row:
                constants[f"{_pair_key(ab)}|{_pair_key(cd)}"] = {
                    _pair_key(ef): str(c) for ef, c in sorted(row.items())}
    metric_entries: Dict[str, str] = {}
    inverse_entries: Dict[str, str] = {}
    for ab in labels:
        for cd in labels:
            key = f"{_pair_key(ab)}|{_pair_key(cd)}"
            value = g.entry(ab, cd)
            if value:
                metric_entries[key] = str(value)
            raised = g.inverse_entry(ab, cd)
            if raised:
                inverse_entries[key] = str(raised)
    return {
        "spec": {
            "algebra": spec.describe(),
            "N": spec.N,
            "theta0": spec.theta0,
        },
        "basis": [_pair_key(ab) for ab in labels],
        "structure_constants": constants,
        "metric": metric_entries,
        "metric_inverse": inverse_entries,
        "engine_version": __version__,
    }


def _cmd_dump(config: RunConfig) -> int:
    payload = _dump_payload(_algebra(config))
    if config.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(f"algebra: {payload['spec']['algebra']}")
        print("basis: " + "  ".join(payload["basis"]))
        for key, row in payload["structure_constants"].items():
            body = " + ".join(f"({c})*({ef})" for ef, c in row.items())
            print(f"f[{key}] = {body}")
        for key, value in payload["metric"].items():
            print(f"g[{key}] = {value}")
        for key, value in payload["metric_inverse"].items():
            print(f"ginv[{key}] = {value}")
    return 0


_DISPATCH = {
    "lie": _cmd_lie,
    "model": _cmd_model,
    "solve-lambda": _cmd_solve,
    "dump-tables": _cmd_dump,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already reported the problem on stderr
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        config = build_config(ns)
        if config.term_ceiling is not None:
            set_term_ceiling(config.term_ceiling)
        return _DISPATCH[config.subcommand](config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    console_main()
