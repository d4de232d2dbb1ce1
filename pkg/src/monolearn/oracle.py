"""Query-counting membership oracle and the knowledge it accumulates."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ._bits import (
    check_n,
    down_mask,
    full_mask,
    is_down_closed,
    is_up_closed,
    popcount,
    up_mask,
)
from .core import ElementSet, MonotoneFn, SetLike, _as_mask
from .enumeration import ENUM_MAX_N, certificate_sizes, monotone_tables


class Deduced(enum.Enum):
    ZERO = 0
    ONE = 1
    UNKNOWN = None


@dataclass(frozen=True)
class PartialKnowledge:
    """Points known to be 0 (a down-set) and known to be 1 (an up-set)."""

    n: int
    zeros: int = 0
    ones: int = 0

    def __post_init__(self):
        check_n(self.n)
        if self.zeros & self.ones:
            raise ValueError("zeros and ones overlap")
        full = full_mask(self.n)
        if self.zeros & ~full or self.ones & ~full:
            raise ValueError(f"knowledge masks exceed 2**{self.n} points")
        if not is_down_closed(self.n, self.zeros):
            raise ValueError("zeros must be downward closed")
        if not is_up_closed(self.n, self.ones):
            raise ValueError("ones must be upward closed")

    @classmethod
    def empty(cls, n: int) -> "PartialKnowledge":
        return cls(n)

    @classmethod
    def from_answers(cls, n: int, answers) -> "PartialKnowledge":
        k = cls(n)
        for s, a in answers:
            k = k.with_answer(s, a)
        return k

    def with_answer(self, s: SetLike, answer: int) -> "PartialKnowledge":
        """Add one answer and its monotone closure; contradictions raise."""
        m = _as_mask(s, self.n)
        if answer:
            ones, zeros = self.ones | up_mask(self.n, m), self.zeros
        else:
            zeros, ones = self.zeros | down_mask(self.n, m), self.ones
        if zeros & ones:
            raise ValueError(f"answer {answer} at {ElementSet(m, self.n)} contradicts knowledge")
        return _trusted_knowledge(self.n, zeros, ones)

    def value(self, s: SetLike) -> Deduced:
        m = _as_mask(s, self.n)
        if self.zeros >> m & 1:
            return Deduced.ZERO
        if self.ones >> m & 1:
            return Deduced.ONE
        return Deduced.UNKNOWN

    def undetermined(self) -> int:
        """Table mask of points whose value cannot be deduced."""
        return full_mask(self.n) & ~(self.zeros | self.ones)

    def undetermined_count(self) -> int:
        return popcount(self.undetermined())

    def is_complete(self) -> bool:
        return self.undetermined() == 0

    def admits(self, f: MonotoneFn) -> bool:
        return f.n == self.n and f.table & self.zeros == 0 and f.table & self.ones == self.ones


def _trusted_knowledge(n: int, zeros: int, ones: int) -> PartialKnowledge:
    k = object.__new__(PartialKnowledge)
    object.__setattr__(k, "n", n)
    object.__setattr__(k, "zeros", zeros)
    object.__setattr__(k, "ones", ones)
    return k


def deduced_value(knowledge: PartialKnowledge, s: SetLike) -> Deduced:
    return knowledge.value(s)


def _consistent_mask(knowledge: PartialKnowledge) -> tuple[np.ndarray, np.ndarray]:
    if knowledge.n > ENUM_MAX_N:
        raise ValueError(f"consistent-function search supports n <= {ENUM_MAX_N}")
    tables = monotone_tables(knowledge.n)
    z = np.uint64(knowledge.zeros)
    o = np.uint64(knowledge.ones)
    return tables, ((tables & z) == 0) & ((tables & o) == o)


def consistent_tables(knowledge: PartialKnowledge) -> np.ndarray:
    tables, ok = _consistent_mask(knowledge)
    return tables[ok]


def consistent_functions(knowledge: PartialKnowledge) -> Iterator[MonotoneFn]:
    """Every monotone function agreeing with the knowledge, ascending by table."""
    n = knowledge.n
    for t in consistent_tables(knowledge).tolist():
        yield MonotoneFn._trusted(n, t)


def count_consistent(knowledge: PartialKnowledge) -> int:
    _, ok = _consistent_mask(knowledge)
    return int(np.count_nonzero(ok))


def min_remaining_certificate(knowledge: PartialKnowledge) -> int:
    """Smallest certificate size among the functions still consistent."""
    tables = consistent_tables(knowledge)
    if tables.size == 0:
        raise ValueError("no monotone function is consistent with this knowledge")
    return int(certificate_sizes(tables, knowledge.n).min())


@dataclass
class QueryRecord:
    index: int
    set_mask: int
    answer: int
    was_deducible: bool

    def to_json(self) -> dict:
        return {"index": self.index, "set_mask": self.set_mask, "answer": self.answer,
                "was_deducible": self.was_deducible}


@dataclass
class OracleSession:
    """One hidden function, one learner. Every call to :meth:`query` is charged."""

    hidden: MonotoneFn
    transcript: list[QueryRecord] = field(default_factory=list)
    knowledge: PartialKnowledge = None
    unreasonable_count: int = 0

    def __post_init__(self):
        if self.knowledge is None:
            self.knowledge = PartialKnowledge.empty(self.hidden.n)

    @property
    def n(self) -> int:
        return self.hidden.n

    @property
    def asked_count(self) -> int:
        return len(self.transcript)

    @property
    def asked(self) -> list[tuple[ElementSet, int]]:
        return [(ElementSet(r.set_mask, self.n), r.answer) for r in self.transcript]

    def query(self, s: SetLike) -> int:
        m = _as_mask(s, self.n)
        answer = (self.hidden.table >> m) & 1
        deducible = self.knowledge.value(m) is not Deduced.UNKNOWN
        if deducible:
            self.unreasonable_count += 1
        else:
            self.knowledge = self.knowledge.with_answer(m, answer)
        self.transcript.append(QueryRecord(len(self.transcript), m, answer, deducible))
        return answer

    def transcript_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json()) + "\n" for r in self.transcript)


def query(session: OracleSession, s: SetLike) -> int:
    return session.query(s)


def replay(hidden: MonotoneFn, jsonl: str) -> OracleSession:
    """Re-run a transcript against ``hidden``; raises if any recorded answer differs."""
    session = OracleSession(hidden)
    for line in jsonl.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        got = session.query(rec["set_mask"])
        if got != rec["answer"]:
            raise ValueError(f"transcript answer mismatch at query {rec['index']}")
    return session
