"""Classical reconstruction algorithms run against an :class:`OracleSession`.

Find-Border (Gainanov) grows the minimal upper sets one at a time by
shrinking a known true point; its dual grows maximal lower sets. Hansel's
method walks a symmetric chain decomposition, shortest chains first.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable

from ._bits import check_n, iter_bits, popcount
from .core import ElementSet, MonotoneFn, SetLike, _as_mask
from .oracle import Deduced, OracleSession, QueryRecord


@dataclass
class LearnResult:
    learned: MonotoneFn
    questions_asked: int
    transcript: list[QueryRecord]


@lru_cache(maxsize=None)
def _probe_order(n: int, largest_first: bool) -> tuple[int, ...]:
    sign = -1 if largest_first else 1
    return tuple(sorted(range(1 << n), key=lambda s: (sign * popcount(s), s)))


def _next_probe(session: OracleSession, largest_first: bool):
    und = session.knowledge.undetermined()
    if not und:
        return None
    for s in _probe_order(session.n, largest_first):
        if und >> s & 1:
            return s
    raise AssertionError("undetermined point not found")


def find_border_minimize(session: OracleSession, start: SetLike) -> ElementSet:
    """Shrink a known true point to a minimal upper set inside it.

    Elements are removed in increasing index order; a removal whose outcome
    is already deducible costs nothing.
    """
    current = _as_mask(start, session.n)
    if session.knowledge.value(current) is not Deduced.ONE:
        raise ValueError(f"start {ElementSet(current, session.n)} is not known to be 1")
    for i in iter_bits(current):
        candidate = current & ~(1 << i)
        known = session.knowledge.value(candidate)
        if known is Deduced.ONE:
            current = candidate
        elif known is Deduced.UNKNOWN and session.query(candidate):
            current = candidate
    return ElementSet(current, session.n)


def find_border_maximize(session: OracleSession, start: SetLike) -> ElementSet:
    """Dual of :func:`find_border_minimize`: grow a known false point to a maximal one."""
    n = session.n
    current = _as_mask(start, n)
    if session.knowledge.value(current) is not Deduced.ZERO:
        raise ValueError(f"start {ElementSet(current, n)} is not known to be 0")
    for i in range(n):
        if current >> i & 1:
            continue
        candidate = current | (1 << i)
        known = session.knowledge.value(candidate)
        if known is Deduced.ZERO:
            current = candidate
        elif known is Deduced.UNKNOWN and not session.query(candidate):
            current = candidate
    return ElementSet(current, n)


def _result(session: OracleSession) -> LearnResult:
    k = session.knowledge
    if not k.is_complete():
        raise AssertionError("learner stopped before the function was determined")
    return LearnResult(MonotoneFn(session.n, k.ones), session.asked_count, list(session.transcript))


def find_border_learn(session: OracleSession) -> LearnResult:
    """Probe the largest undetermined set; every true answer is shrunk to a minimal upper set."""
    while (probe := _next_probe(session, largest_first=True)) is not None:
        if session.query(probe):
            find_border_minimize(session, probe)
    return _result(session)


def find_border_learn_dual(session: OracleSession) -> LearnResult:
    while (probe := _next_probe(session, largest_first=False)) is not None:
        if not session.query(probe):
            find_border_maximize(session, probe)
    return _result(session)


@dataclass(frozen=True)
class ChainDecomposition:
    """Symmetric chains partitioning the subsets of ``{1..n}`` (chains as masks, bottom first)."""

    n: int
    chains: tuple[tuple[int, ...], ...]

    def as_sets(self) -> list[list[ElementSet]]:
        return [[ElementSet(s, self.n) for s in chain] for chain in self.chains]

    def __len__(self) -> int:
        return len(self.chains)


@lru_cache(maxsize=None)
def _hansel_chains(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 1:
        return ((0, 1),)
    new = 1 << (n - 1)
    out = []
    for chain in _hansel_chains(n - 1):
        out.append(chain + (chain[-1] | new,))
        if len(chain) > 1:
            out.append(tuple(s | new for s in chain[:-1]))
    return tuple(out)


def hansel_chains(n: int) -> ChainDecomposition:
    """Recursive symmetric chain decomposition: each chain spawns an extended and a trimmed copy."""
    check_n(n)
    return ChainDecomposition(n, _hansel_chains(n))


def hansel_learn(session: OracleSession) -> LearnResult:
    """Chains in increasing length; in each, ask upward from the lowest undetermined point."""
    chains = sorted(_hansel_chains(session.n), key=len)
    for chain in chains:
        for s in chain:
            known = session.knowledge.value(s)
            if known is Deduced.ONE:
                break
            if known is Deduced.UNKNOWN and session.query(s):
                break
    return _result(session)


def hansel_worst_case(n: int) -> int:
    """C(n, floor(n/2)) + C(n, floor(n/2)+1)."""
    return comb(n, n // 2) + comb(n, n // 2 + 1)


Learner = Callable[[OracleSession], LearnResult]

LEARNERS: dict[str, Learner] = {
    "find-border": find_border_learn,
    "find-border-dual": find_border_learn_dual,
    "hansel": hansel_learn,
}


def get_learner(name: str) -> Learner:
    try:
        return LEARNERS[name]
    except KeyError:
        raise ValueError(f"unknown learner {name!r}; choose from {sorted(LEARNERS)}") from None


def learn(f: MonotoneFn, algo: str | Learner = "find-border") -> LearnResult:
    learner = get_learner(algo) if isinstance(algo, str) else algo
    return learner(OracleSession(f))
