"""Command-line entry point: ``simplexeq verify|list|hopf-validate|qdilog``.

Exit codes: 0 when every check passes (skipped checks do not fail a run),
1 when any check fails, 2 on configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import __version__
from . import qdilog as qd
from .errors import ConfigError, SimplexError
from .hopf import HopfData, builtin, validate_hopf
from .registry import DEFAULT_KEYS, RunOptions, equations_for, run_check, validate_key
from .report import FAIL, RelationReport
from .scalars import DEFAULT_PRIME, is_prime

JOBS_ENV = "SIMPLEXEQ_JOBS"

BUILTIN_SUITES = {
    "paper-all": list(DEFAULT_KEYS),
    "odoubles": [k for k in DEFAULT_KEYS if k.startswith("odouble:")],
    "birational": [k for k in DEFAULT_KEYS if k.split(":")[0] in
                   ("group", "ring-eps", "interval", "example1", "example2")],
    "qdilog": [k for k in DEFAULT_KEYS if k.startswith("qdilog:")],
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["suite", "checks", "seed", "version"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "seed": {"type": "integer"},
        "version": {"type": "string"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "equation", "backend", "status", "samples", "retries",
                             "counterexample", "ms"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "equation": {"type": "string"},
                    "backend": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skipped"]},
                    "samples": {"type": "integer", "minimum": 0},
                    "retries": {"type": "integer", "minimum": 0},
                    "counterexample": {},
                    "ms": {"type": "number", "minimum": 0},
                    "details": {"type": "object"},
                },
            },
        },
    },
}


@dataclass
class QdilogConfig:
    order: int = qd.QParams.order
    window: int = qd.QParams.window
    floor: int = qd.QParams.floor
    kcap: int = qd.QParams.kcap
    states: list | None = None


@dataclass
class SuiteConfig:
    suite: str = "paper-all"
    solutions: list | None = None  # registry keys; None means the named built-in suite
    files: list = field(default_factory=list)  # structure-constant JSON files
    equations: list | None = None  # restrict to these equation names
    prime: int = DEFAULT_PRIME
    samples: int = 200
    seed: int = 0
    qdilog: QdilogConfig = field(default_factory=QdilogConfig)
    corrupt: bool = False
    out: str | None = None

    @classmethod
    def from_json(cls, data: dict, base: Path = Path(".")) -> "SuiteConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        _reject_unknown(data, cls, "config")
        q = data.get("qdilog", {})
        if not isinstance(q, dict):
            raise ConfigError("'qdilog' must be an object")
        _reject_unknown(q, QdilogConfig, "qdilog")
        kwargs = {k: v for k, v in data.items() if k != "qdilog"}
        if "files" in kwargs:
            kwargs["files"] = [str((base / f).resolve()) if not Path(f).is_absolute() else f
                               for f in kwargs["files"]]
        cfg = cls(**kwargs, qdilog=QdilogConfig(**q))
        cfg.validate()
        return cfg

    def validate(self):
        for name in ("prime", "samples", "seed"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise ConfigError(f"{name!r} must be an integer")
        if self.samples < 1:
            raise ConfigError("'samples' must be positive")
        if not is_prime(self.prime):
            raise ConfigError(f"'prime' {self.prime} is not prime")
        if self.solutions is None and self.suite not in BUILTIN_SUITES and not self.files:
            raise ConfigError(f"unknown suite {self.suite!r} and no solutions given")
        for p in self.files:
            if not Path(p).is_file():
                raise ConfigError(f"structure-constant file not found: {p}")
        q = self.qdilog
        if q.window < 1 or q.kcap < 1 or q.order < 0:
            raise ConfigError("qdilog window, kcap must be positive and order nonnegative")
        if q.states is not None:
            if not all(isinstance(s, list) and all(isinstance(x, int) for x in s)
                       for s in q.states):
                raise ConfigError("qdilog states must be lists of integers")

    def keys(self) -> list:
        keys = list(self.solutions) if self.solutions is not None else (
            list(BUILTIN_SUITES.get(self.suite, [])))
        keys += [f"file:{p}" for p in self.files]
        for key in keys:
            validate_key(key)
        return keys

    def options(self) -> RunOptions:
        q = self.qdilog
        params = qd.QParams(order=q.order, window=q.window, floor=q.floor, kcap=q.kcap)
        states = tuple(tuple(s) for s in q.states) if q.states else None
        return RunOptions(self.prime, self.samples, self.seed, params, states, self.corrupt)


def _reject_unknown(data: dict, cls, where: str):
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {unknown}")


def load_config(path) -> SuiteConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        return SuiteConfig.from_json(data, path.parent)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


# --------------------------------------------------------------------------
# running


def plan(cfg: SuiteConfig) -> list:
    """Ordered (key, equation) pairs for a suite."""
    items = []
    for key in cfg.keys():
        for eq in equations_for(key):
            if cfg.equations is None or eq in cfg.equations:
                items.append((key, eq))
    if not items:
        raise ConfigError("the suite selects no checks")
    return items


def _run_item(item) -> dict:
    key, equation, opts = item
    try:
        rep = run_check(key, equation, opts)
    except ConfigError:
        raise
    except (SimplexError, ArithmeticError, ValueError) as exc:
        # a check that cannot complete is a failed verification, not a config error
        rep = RelationReport(f"{key}:{equation}", equation, "n/a", FAIL,
                             counterexample={"error": type(exc).__name__, "message": str(exc)})
    return rep.to_json()


def run_suite(cfg: SuiteConfig, jobs: int = 1) -> dict:
    opts = cfg.options()
    items = [(key, eq, opts) for key, eq in plan(cfg)]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            checks = list(pool.map(_run_item, items))
    else:
        checks = [_run_item(item) for item in items]
    return {"suite": cfg.suite, "checks": checks, "seed": cfg.seed, "version": __version__}


def exit_code(report: dict) -> int:
    return 1 if any(c["status"] == FAIL for c in report["checks"]) else 0


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _emit(report: dict, out: str | None, quiet: bool = False):
    if out:
        Path(out).write_text(dumps_report(report))
    if not quiet:
        for c in report["checks"]:
            print(f"{c['status'].upper():7s} {c['name']:45s} {c['backend']:32s} {c['ms']:9.1f} ms")
        failed = sum(c["status"] == FAIL for c in report["checks"])
        print(f"{len(report['checks'])} checks, {failed} failed")


# --------------------------------------------------------------------------
# argument parsing


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int)
    p.add_argument("--prime", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--jobs", type=int, default=_default_jobs(),
                   help=f"worker processes (default from ${JOBS_ENV}, else 1)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--quiet", action="store_true", help="no per-check lines on stdout")


def _series_flags(p: argparse.ArgumentParser):
    p.add_argument("--order", type=int, help="truncation order N")
    p.add_argument("--window", type=int, help="label window W")
    p.add_argument("--floor", type=int, help="most negative q exponent F")
    p.add_argument("--kcap", type=int, help="largest summation index K")
    p.add_argument("--states", help="JSON file with a list of integer label lists")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplexeq",
                                     description="Verify pentagon, ten-term, tetrahedron "
                                                 "and four-simplex solutions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--config", help="suite config (JSON)")
    v.add_argument("--suite", help=f"built-in suite: {', '.join(BUILTIN_SUITES)}")
    v.add_argument("--solution", action="append", help="registry key (repeatable)")
    v.add_argument("--equation", action="append", help="restrict to an equation (repeatable)")
    v.add_argument("--corrupt", action="store_true", help="inject a single-entry corruption")
    _common(v)
    _series_flags(v)

    ls = sub.add_parser("list", help="registry keys and their equations")
    ls.add_argument("--json", action="store_true")

    h = sub.add_parser("hopf-validate", help="check the Hopf axioms only")
    h.add_argument("source", help="built-in name (Z2, S3*, H4, ...) or a JSON file")
    h.add_argument("--out")

    q = sub.add_parser("qdilog", help="run the q-series checks")
    q.add_argument("--variant", choices=qd.SBAR_VARIANTS, action="append")
    _common(q)
    _series_flags(q)
    return parser


def _apply_overrides(cfg: SuiteConfig, args) -> SuiteConfig:
    for name in ("seed", "prime", "samples"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if getattr(args, "out", None):
        cfg.out = args.out
    q = cfg.qdilog
    for name in ("order", "window", "floor", "kcap"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(q, name, val)
    if getattr(args, "states", None):
        q.states = _load_states(args.states)
    cfg.validate()
    return cfg


def _load_states(path) -> list:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"states file not found: {path}")
    try:
        states = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(states, list) or not all(
            isinstance(s, list) and all(isinstance(x, int) for x in s) for s in states):
        raise ConfigError(f"{path}: expected a list of integer lists")
    return states


def _cmd_verify(args) -> int:
    cfg = load_config(args.config) if args.config else SuiteConfig()
    if args.suite:
        cfg.suite = args.suite
        if not args.config:
            cfg.solutions = None
    if args.solution:
        cfg.solutions = args.solution
    if args.equation:
        cfg.equations = args.equation
    if args.corrupt:
        cfg.corrupt = True
    cfg = _apply_overrides(cfg, args)
    report = run_suite(cfg, max(1, args.jobs))
    _emit(report, cfg.out, args.quiet)
    return exit_code(report)


def _cmd_list(args) -> int:
    rows = [(key, equations_for(key)) for key in DEFAULT_KEYS]
    if args.json:
        print(json.dumps({"solutions": dict(rows), "suites": BUILTIN_SUITES}, indent=2))
    else:
        for key, eqs in rows:
            print(f"{key:24s} {' '.join(eqs)}")
    return 0


def _cmd_hopf(args) -> int:
    path = Path(args.source)
    if path.suffix == ".json" or path.exists():
        if not path.is_file():
            raise ConfigError(f"structure-constant file not found: {path}")
        try:
            h = HopfData.load(path)
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
    else:
        try:
            h = builtin(args.source)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    rep = validate_hopf(h)
    for axiom, status in rep.details.items():
        print(f"{status.upper():5s} {axiom}")
    if rep.counterexample:
        print(f"first violation: {rep.counterexample}")
    report = {"suite": "hopf-validate", "checks": [rep.to_json()], "seed": 0,
              "version": __version__}
    if args.out:
        Path(args.out).write_text(dumps_report(report))
    return exit_code(report)


def _cmd_qdilog(args) -> int:
    variants = args.variant or list(qd.SBAR_VARIANTS)
    cfg = SuiteConfig(suite="qdilog", solutions=[f"qdilog:{v}" for v in variants])
    cfg = _apply_overrides(cfg, args)
    report = run_suite(cfg, max(1, args.jobs))
    _emit(report, cfg.out, args.quiet)
    return exit_code(report)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"verify": _cmd_verify, "list": _cmd_list, "hopf-validate": _cmd_hopf,
                "qdilog": _cmd_qdilog}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
