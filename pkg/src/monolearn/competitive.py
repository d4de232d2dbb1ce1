"""Competitive ratios of learners and decision trees, and analytic lower bounds on c_n*.

Ratios are :class:`fractions.Fraction` throughout; nothing is compared in
floating point.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from ._bits import ceil_log2, check_n
from .core import MonotoneFn, to_hex
from .enumeration import ENUM_MAX_N, b_closed_form, b_profile, certificate_sizes, monotone_tables
from .learners import Learner, get_learner
from .oracle import OracleSession
from .trees import DecisionTree, Leaf, Node, run_tree

Ratio = Fraction

EXHAUSTIVE_MAX_N = 5
DEFAULT_SAMPLE = 100_000


class ExactnessError(RuntimeError):
    """An algorithm returned the wrong function (or none) for some input."""


def ratio_str(r: Fraction) -> str:
    """Always ``p/q``, also for integers."""
    return f"{r.numerator}/{r.denominator}"


def parse_ratio(text: str) -> Fraction:
    return Fraction(text)


@dataclass
class CompetitivityReport:
    n: int
    max_ratio: Fraction
    argmax_functions: list[MonotoneFn]
    per_certificate_worst: dict[int, Fraction]
    mean_questions: Fraction
    evaluated: int
    sampled: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_ratio": ratio_str(self.max_ratio),
            "argmax_functions": [to_hex(f) for f in self.argmax_functions],
            "per_certificate_worst": {str(k): ratio_str(v)
                                      for k, v in sorted(self.per_certificate_worst.items())},
            "mean_questions": ratio_str(self.mean_questions),
            "evaluated": self.evaluated,
            "mode": "sampled lower bound on max ratio" if self.sampled else "exhaustive",
        }


@dataclass
class _Tally:
    """Partial reduction; :meth:`merge` is associative and order-independent."""

    best: Fraction = Fraction(0)
    argmax: list[int] = field(default_factory=list)
    per_m: dict[int, Fraction] = field(default_factory=dict)
    total_asked: int = 0
    count: int = 0

    def add(self, table: int, asked: int, m: int) -> None:
        r = Fraction(asked, m)
        if r > self.best:
            self.best, self.argmax = r, [table]
        elif r == self.best:
            self.argmax.append(table)
        if r > self.per_m.get(m, Fraction(0)):
            self.per_m[m] = r
        self.total_asked += asked
        self.count += 1

    def merge(self, other: "_Tally") -> "_Tally":
        out = _Tally()
        if self.best > other.best:
            out.best, out.argmax = self.best, list(self.argmax)
        elif other.best > self.best:
            out.best, out.argmax = other.best, list(other.argmax)
        else:
            out.best, out.argmax = self.best, sorted(self.argmax + other.argmax)
        out.per_m = dict(self.per_m)
        for m, r in other.per_m.items():
            if r > out.per_m.get(m, Fraction(0)):
                out.per_m[m] = r
        out.total_asked = self.total_asked + other.total_asked
        out.count = self.count + other.count
        return out


Algorithm = Union[str, Learner, DecisionTree]


def _question_counter(algorithm: Algorithm, n: int) -> Callable[[MonotoneFn], int]:
    if isinstance(algorithm, (Node, Leaf)):
        tree = algorithm

        def count(f: MonotoneFn) -> int:
            end, depth = run_tree(tree, f)
            if not isinstance(end, Leaf) or end.function != f:
                raise ExactnessError(f"tree does not reconstruct {f!r}")
            return depth
        return count

    learner = get_learner(algorithm) if isinstance(algorithm, str) else algorithm

    def count(f: MonotoneFn) -> int:
        result = learner(OracleSession(f))
        if result.learned != f:
            raise ExactnessError(f"learner returned {result.learned!r} for {f!r}")
        return result.questions_asked
    return count


def _tally_chunk(count, n: int, tables: list[int], sizes: list[int]) -> _Tally:
    tally = _Tally()
    make = MonotoneFn._trusted
    for t, m in zip(tables, sizes):
        tally.add(t, count(make(n, t)), m)
    return tally


def evaluate_competitivity(algorithm: Algorithm, n: int, sample: int | None = None,
                           seed: int = 0, threads: int = 1) -> CompetitivityReport:
    """max over f of A(f)/m(f), exact, with the functions attaining it.

    Exhaustive for n <= 5; for n = 6 a uniform sample (default 10^5) of the
    enumeration is evaluated and the report is flagged as sampled.
    """
    check_n(n)
    if n > ENUM_MAX_N:
        raise ValueError(f"evaluation supports n <= {ENUM_MAX_N}")
    tables = monotone_tables(n)
    sampled = sample is not None or n > EXHAUSTIVE_MAX_N
    if sampled:
        size = min(sample or DEFAULT_SAMPLE, tables.size)
        rng = np.random.default_rng(seed)
        tables = np.sort(rng.choice(tables, size=size, replace=False))
    sizes = certificate_sizes(tables, n).tolist()
    tables = tables.tolist()
    count = _question_counter(algorithm, n)

    threads = max(1, threads)
    if threads == 1:
        tally = _tally_chunk(count, n, tables, sizes)
    else:
        step = -(-len(tables) // threads)
        chunks = [(tables[i:i + step], sizes[i:i + step]) for i in range(0, len(tables), step)]
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda c: _tally_chunk(count, n, *c), chunks))
        tally = parts[0]
        for part in parts[1:]:
            tally = tally.merge(part)

    make = MonotoneFn._trusted
    return CompetitivityReport(
        n=n,
        max_ratio=tally.best,
        argmax_functions=[make(n, t) for t in sorted(tally.argmax)],
        per_certificate_worst=dict(sorted(tally.per_m.items())),
        mean_questions=Fraction(tally.total_asked, tally.count),
        evaluated=tally.count,
        sampled=sampled,
    )


def trivial_lower_bound(n: int) -> Fraction:
    """c_n* >= 2: both constant functions have certificate size 1 and no single
    question separates them from everything else."""
    check_n(n)
    return Fraction(2)


def _cumulative_b(n: int) -> list[int]:
    """Running sums of b_1(n), b_2(n), ...; closed forms (i <= 4) beyond n = 6."""
    if n <= ENUM_MAX_N:
        profile = b_profile(n)
        top = max(profile.counts)
        sums, acc = [], 0
        for i in range(1, top + 1):
            acc += profile.counts.get(i, 0)
            sums.append(acc)
        return sums
    sums, acc = [], 0
    for i in range(1, 5):
        acc += b_closed_form(i, n)
        sums.append(acc)
    return sums


def log2_lower_bound_detail(n: int) -> tuple[Fraction, int]:
    """Best ceil(log2(b_1 + .. + b_i)) / i and the i attaining it (smallest on ties)."""
    check_n(n)
    best, best_i = Fraction(0), 0
    for i, total in enumerate(_cumulative_b(n), start=1):
        bound = Fraction(ceil_log2(total), i)
        if bound > best:
            best, best_i = bound, i
    return best, best_i


def log2_lower_bound(n: int) -> Fraction:
    return log2_lower_bound_detail(n)[0]


def closed_form_log2_bound(n: int, i: int = 4) -> Fraction:
    """The counting bound at a fixed i using only the closed forms b_1..b_4."""
    check_n(n)
    return Fraction(ceil_log2(sum(b_closed_form(j, n) for j in range(1, i + 1))), i)


def monotone_bound_chain(values: dict[int, Fraction]) -> dict[int, Fraction]:
    """Propagate lower bounds upward in n, since c_{n+1}* >= c_n*."""
    out, running = {}, None
    for n in sorted(values):
        v = Fraction(values[n])
        running = v if running is None else max(running, v)
        out[n] = running
    return out


def bounds_table(n: int) -> dict:
    """All analytic lower bounds for one n, ready for JSON."""
    log2_bound, i = log2_lower_bound_detail(n)
    trivial = trivial_lower_bound(n)
    return {
        "n": n,
        "trivial": ratio_str(trivial),
        "log2": ratio_str(log2_bound),
        "log2_binding_i": i,
        "log2_source": "enumeration" if n <= ENUM_MAX_N else "closed forms b1..b4",
        "best": ratio_str(max(trivial, log2_bound)),
    }
