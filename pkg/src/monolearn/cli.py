"""``monolearn`` command line: JSON-lines on stdout, human summaries on stderr.

Exit status: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, TextIO

from . import competitive, enumeration, learners, optsearch
from .core import certificate_size, from_hex, maximal_lower_sets, minimal_upper_sets, to_hex
from .oracle import OracleSession
from .trees import TreeFormatError, parse_tree, serialize, to_dot

COMMANDS = ("enum", "learn", "evaluate", "bounds", "optimal", "verify-tree")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int
    algo: Optional[str] = None
    budget: Optional[float] = None
    function: Optional[str] = None
    all: bool = False
    inequivalent: bool = False
    profile: bool = False
    file: Optional[str] = None
    emit_tree: Optional[str] = None
    emit_json: Optional[str] = None
    transcript: Optional[str] = None
    claim: Optional[str] = None
    sample: Optional[int] = None
    seed: int = 0
    threads: int = 1

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        caps = {"enum": 6, "learn": 6, "evaluate": 6, "bounds": 16, "optimal": 5,
                "verify-tree": 6}
        if not 1 <= self.n <= caps[self.command]:
            raise UsageError(f"{self.command}: n must be in 1..{caps[self.command]}")
        if self.command in ("learn", "evaluate"):
            if self.algo is None:
                raise UsageError(f"{self.command} needs --algo")
            if self.algo not in learners.LEARNERS:
                raise UsageError(f"unknown algo {self.algo!r}")
        if self.command == "verify-tree" and not self.file:
            raise UsageError("verify-tree needs --file")
        for path in (self.emit_tree, self.emit_json, self.transcript):
            if path:
                _check_writable(path)


def _check_writable(path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise UsageError(f"cannot write to {path}")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise UsageError(f"cannot write to {path}")


def _emit(out: TextIO, record: dict) -> None:
    out.write(json.dumps(record) + "\n")


def _function_record(f) -> dict:
    return {"n": f.n, "table_hex": to_hex(f), "m": certificate_size(f),
            "size_U": len(minimal_upper_sets(f)), "size_L": len(maximal_lower_sets(f))}


def _cmd_enum(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if cfg.profile:
        prof = enumeration.b_profile(cfg.n)
        _emit(out, prof.to_json())
        err.write(f"b-profile n={cfg.n}: total {prof.total()}\n")
        return EXIT_OK
    stream = (enumeration.enumerate_inequivalent(cfg.n) if cfg.inequivalent
              else enumeration.enumerate_all(cfg.n))
    count = 0
    for f in stream:
        _emit(out, _function_record(f))
        count += 1
    err.write(f"{count} {'inequivalent ' if cfg.inequivalent else ''}functions for n={cfg.n}\n")
    return EXIT_OK


def _cmd_learn(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    learner = learners.get_learner(cfg.algo)
    if cfg.function:
        try:
            functions = [from_hex(cfg.function, cfg.n)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        functions = enumeration.enumerate_all(cfg.n)
    worst, total, count = Fraction(0), 0, 0
    for f in functions:
        session = OracleSession(f)
        result = learner(session)
        if result.learned != f:
            err.write(f"learner failed on {to_hex(f)}\n")
            return EXIT_FAIL
        m = certificate_size(f)
        ratio = Fraction(result.questions_asked, m)
        worst = max(worst, ratio)
        total += result.questions_asked
        count += 1
        _emit(out, {"table_hex": to_hex(f), "m": m, "asked": result.questions_asked,
                    "ratio": competitive.ratio_str(ratio)})
        if cfg.transcript and cfg.function:
            with open(cfg.transcript, "w") as fh:
                fh.write(session.transcript_jsonl())
    summary = {"max_ratio": competitive.ratio_str(worst),
               "mean_asked": competitive.ratio_str(Fraction(total, count))}
    _emit(out, {"summary": summary})
    err.write(f"{cfg.algo} n={cfg.n}: max ratio {worst} over {count} functions\n")
    return EXIT_OK


def _cmd_evaluate(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    try:
        report = competitive.evaluate_competitivity(cfg.algo, cfg.n, sample=cfg.sample,
                                                    seed=cfg.seed, threads=cfg.threads)
    except competitive.ExactnessError as exc:
        err.write(f"exactness failure: {exc}\n")
        return EXIT_FAIL
    _emit(out, report.to_json())
    err.write(f"{cfg.algo} n={cfg.n}: max ratio {report.max_ratio}\n")
    return EXIT_OK


def _cmd_bounds(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    row = competitive.bounds_table(cfg.n)
    _emit(out, row)
    err.write(f"c_{cfg.n}* >= {Fraction(row['best'])} (log2 bound binds at i={row['log2_binding_i']})\n")
    return EXIT_OK


def _cmd_optimal(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    outcome = optsearch.compute_optimal(cfg.n, budget=cfg.budget)
    record = outcome.to_json()
    if outcome.exact:
        check = optsearch.verify_tree(outcome.tree, cfg.n)
        record["witness_verified"] = check.max_ratio == outcome.value
        if cfg.emit_tree:
            with open(cfg.emit_tree, "w") as fh:
                fh.write(to_dot(outcome.tree))
        if cfg.emit_json:
            with open(cfg.emit_json, "w") as fh:
                fh.write(serialize(outcome.tree) + "\n")
    _emit(out, record)
    if outcome.exact:
        err.write(f"c_{cfg.n}* = {outcome.value} ({outcome.stats.elapsed:.1f}s)\n")
        return EXIT_OK if record["witness_verified"] else EXIT_FAIL
    upper = outcome.upper if outcome.upper is not None else "?"
    err.write(f"budget exhausted: {outcome.lower} <= c_{cfg.n}* <= {upper}\n")
    return EXIT_OK


def _cmd_verify_tree(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    try:
        with open(cfg.file) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.file}: {exc.strerror}") from None
    try:
        tree = parse_tree(text, cfg.n)
    except TreeFormatError as exc:
        raise UsageError(f"{cfg.file}: {exc}") from None
    try:
        result = optsearch.verify_tree(tree, cfg.n)
    except competitive.ExactnessError as exc:
        err.write(f"verification failed: {exc}\n")
        return EXIT_FAIL
    _emit(out, result.to_json())
    err.write(f"max ratio {result.max_ratio}"
              f"{'' if result.complete else ' (bound over reasonable completions)'}\n")
    if result.unreasonable:
        err.write(f"warning: {len(result.unreasonable)} deducible question(s) at {result.unreasonable}\n")
    if cfg.claim is not None and result.max_ratio > Fraction(cfg.claim):
        err.write(f"tree exceeds claimed competitivity {cfg.claim}\n")
        return EXIT_FAIL
    return EXIT_OK


_HANDLERS = {
    "enum": _cmd_enum,
    "learn": _cmd_learn,
    "evaluate": _cmd_evaluate,
    "bounds": _cmd_bounds,
    "optimal": _cmd_optimal,
    "verify-tree": _cmd_verify_tree,
}


def run(cfg: RunConfig, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg.validate()
        return _HANDLERS[cfg.command](cfg, out, err)
    except UsageError as exc:
        err.write(f"monolearn: error: {exc}\n")
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    default_threads = int(os.environ.get("MONOLEARN_THREADS", "1") or 1)
    parser = argparse.ArgumentParser(prog="monolearn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, required=True, help="number of variables")
        p.add_argument("--threads", type=int, default=default_threads)

    p = sub.add_parser("enum", help="list monotone functions or their b-profile")
    common(p)
    p.add_argument("--inequivalent", action="store_true")
    p.add_argument("--profile", action="store_true")

    algos = sorted(learners.LEARNERS)
    p = sub.add_parser("learn", help="run a learner on one or all functions")
    common(p)
    p.add_argument("--algo", choices=algos, required=True)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--function", metavar="HEX")
    which.add_argument("--all", action="store_true")
    p.add_argument("--transcript", metavar="FILE", help="query log for --function (JSON-lines)")

    p = sub.add_parser("evaluate", help="competitivity report for a learner")
    common(p)
    p.add_argument("--algo", choices=algos, required=True)
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bounds", help="analytic lower bounds on c_n*")
    common(p)

    p = sub.add_parser("optimal", help="exact c_n* with a witness tree")
    common(p)
    p.add_argument("--budget", type=float, metavar="SECONDS")
    p.add_argument("--emit-tree", metavar="FILE.dot")
    p.add_argument("--emit-json", metavar="FILE.json")

    p = sub.add_parser("verify-tree", help="check a decision tree (JSON) against all functions")
    common(p)
    p.add_argument("--file", required=True)
    p.add_argument("--claim", metavar="RATIO", help="fail if the tree is worse than this")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    fields = {k.replace("-", "_"): v for k, v in vars(args).items() if k != "verbose"}
    cfg = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
