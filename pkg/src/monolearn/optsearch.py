"""Exact optimal competitivity c_n* by minimax search over reasonable decision trees.

The algorithm picks a question whose answer is not yet deducible; the
adversary picks the answer. A path ends when a single monotone function is
left, and is charged ``questions / m(f)``.

Two engines share the bookkeeping in :class:`SearchContext`:

* :func:`state_value` evaluates the rational minimax value directly,
  memoized on (canonical knowledge, questions asked).
* :func:`compute_optimal` fixes a threshold ``c`` and computes, per
  canonical knowledge state, the largest number of questions already asked
  from which every leaf ratio can still be kept ``<= c``. That value does
  not depend on the path length, so the memo key is the canonical state
  alone. ``c_n*`` is found by binary search over the finitely many possible
  leaf ratios ``d/m``, and a witness tree is extracted at the optimum.

Both engines restrict questions at a node to one per class of equivalent
children: two questions whose 0-children and 1-children are pairwise
relabelings of each other have equal value.
"""
from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import _accel
from ._bits import ceil_log2, check_n, down_masks, full_mask, iter_bits, popcount, up_masks
from .competitive import CompetitivityReport, ExactnessError, evaluate_competitivity, ratio_str
from .core import MonotoneFn
from .enumeration import ENUM_MAX_N, certificate_point_masks, certificate_sizes, monotone_tables
from .oracle import PartialKnowledge, _trusted_knowledge
from .trees import DecisionTree, Leaf, Node, Open, is_complete

log = logging.getLogger(__name__)

EXACT_MAX_N = 4
SEARCH_MAX_N = 5


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SearchState:
    knowledge: PartialKnowledge
    questions_asked: int = 0

    @classmethod
    def initial(cls, n: int) -> "SearchState":
        return cls(PartialKnowledge.empty(n), 0)

    def ask(self, s: int, answer: int) -> "SearchState":
        return SearchState(self.knowledge.with_answer(s, answer), self.questions_asked + 1)


class SearchContext:
    """Per-n tables: all monotone functions, their certificate points and sizes."""

    def __init__(self, n: int):
        check_n(n)
        if n > ENUM_MAX_N:
            raise ValueError(f"search needs the full enumeration (n <= {ENUM_MAX_N})")
        self.n = n
        self.full = full_mask(n)
        self.tables = monotone_tables(n)
        self.sizes = certificate_sizes(self.tables, n)
        self.cert = certificate_point_masks(self.tables, n)
        self.up = up_masks(n)
        self.down = down_masks(n)
        self.max_depth = 1 << n

    def consistent(self, zeros: int, ones: int) -> np.ndarray:
        z, o = np.uint64(zeros), np.uint64(ones)
        t = self.tables
        return np.flatnonzero(((t & z) == 0) & ((t & o) == o))

    def profile(self, zeros: int, ones: int) -> tuple[np.ndarray, np.ndarray, int]:
        """(m_f, uncertified certificate points r_f) over consistent f, and u."""
        idx = self.consistent(zeros, ones)
        und = self.full & ~(zeros | ones)
        remaining = np.bitwise_count(self.cert[idx] & np.uint64(und)).astype(np.int64)
        return self.sizes[idx], remaining, popcount(und)

    def canon(self, zeros: int, ones: int) -> tuple[int, int]:
        return _accel.canonical_pair(zeros, ones, self.n)

    def children(self, zeros: int, ones: int) -> Iterator[tuple[int, tuple[int, int], tuple[int, int]]]:
        """Undetermined questions (ascending) with their raw 0- and 1-children,
        skipping questions whose canonical child pair was already produced."""
        seen = set()
        und = self.full & ~(zeros | ones)
        for s in iter_bits(und):
            c0 = (zeros | self.down[s], ones)
            c1 = (zeros, ones | self.up[s])
            key = (self.canon(*c0), self.canon(*c1))
            if key in seen:
                continue
            seen.add(key)
            yield s, c0, c1

    def candidate_ratios(self) -> list[Fraction]:
        """Every possible leaf ratio d/m, sorted."""
        ms = sorted(set(self.sizes.tolist()))
        return sorted({Fraction(d, m) for d in range(1, self.max_depth + 1) for m in ms})


@lru_cache(maxsize=ENUM_MAX_N)
def search_context(n: int) -> SearchContext:
    return SearchContext(n)


def canonical_state(knowledge: PartialKnowledge) -> PartialKnowledge:
    """Lexicographically smallest (zeros, ones) over all simultaneous relabelings."""
    z, o = _accel.canonical_pair(knowledge.zeros, knowledge.ones, knowledge.n)
    return _trusted_knowledge(knowledge.n, z, o)


def certificate_lower_bound(knowledge: PartialKnowledge, questions_asked: int):
    """Ratio the adversary can force from here, with a function forcing it.

    Every certificate point of the final function must be asked itself, so a
    consistent f with r_f certificate points still undetermined ends at a
    leaf of depth >= questions_asked + r_f. Returns ``(ratio, f)`` maximizing
    ``(questions_asked + r_f) / m(f)`` (smallest table on ties).
    """
    ctx = search_context(knowledge.n)
    idx = ctx.consistent(knowledge.zeros, knowledge.ones)
    if idx.size == 0:
        raise ValueError("no monotone function is consistent with this knowledge")
    und = np.uint64(ctx.full & ~(knowledge.zeros | knowledge.ones))
    best, best_f = None, None
    for i in idx.tolist():
        r = popcount(int(ctx.cert[i] & und))
        value = Fraction(questions_asked + r, int(ctx.sizes[i]))
        if best is None or value > best:
            best, best_f = value, MonotoneFn._trusted(knowledge.n, int(ctx.tables[i]))
    return best, best_f


@dataclass
class SearchStats:
    states_expanded: int = 0
    memo_hits: int = 0
    elapsed: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {"states_expanded": self.states_expanded, "memo_hits": self.memo_hits}
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


# ----------------------------------------------------------------- rational minimax

class _ValueSearch:
    def __init__(self, ctx: SearchContext, memo: Optional[dict], canonicalize: bool,
                 prune: bool):
        self.ctx = ctx
        self.memo = memo
        self.canonicalize = canonicalize
        self.prune = prune
        self.stats = SearchStats()

    def value(self, zeros: int, ones: int, q: int) -> Fraction:
        ctx = self.ctx
        if self.memo is not None:
            key = (ctx.canon(zeros, ones) if self.canonicalize else (zeros, ones), q)
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                return hit
        self.stats.states_expanded += 1
        sizes, remaining, u = ctx.profile(zeros, ones)
        if sizes.size == 0:
            raise ValueError("inconsistent state")
        if sizes.size == 1:
            result = Fraction(q, int(sizes[0]))
        else:
            lower = upper = None
            if self.prune:
                lower = max(
                    _max_ratio(q + remaining, sizes),
                    Fraction(q + ceil_log2(int(sizes.size)), int(sizes.max())),
                )
                upper = Fraction(q + u, int(sizes.min()))
            if lower is not None and lower == upper:
                result = lower
            else:
                result = self._expand(zeros, ones, q, lower)
        if self.memo is not None:
            self.memo[key] = result
        return result

    def _expand(self, zeros: int, ones: int, q: int, lower) -> Fraction:
        best = None
        questions = (self.ctx.children(zeros, ones) if self.canonicalize
                     else _all_children(self.ctx, zeros, ones))
        for _, c0, c1 in questions:
            v0 = self.value(*c0, q + 1)
            if self.prune and best is not None and v0 >= best:
                continue
            v = max(v0, self.value(*c1, q + 1))
            if best is None or v < best:
                best = v
                if self.prune and best == lower:
                    break
        return best


def _all_children(ctx: SearchContext, zeros: int, ones: int):
    for s in iter_bits(ctx.full & ~(zeros | ones)):
        yield s, (zeros | ctx.down[s], ones), (zeros, ones | ctx.up[s])


def _max_ratio(nums: np.ndarray, dens: np.ndarray) -> Fraction:
    pairs = set(zip(nums.tolist(), dens.tolist()))
    return max(Fraction(a, b) for a, b in pairs)


def state_value(state: SearchState, memo: Optional[dict] = None, canonicalize: bool = True,
                prune: bool = True) -> Fraction:
    """Minimax competitive ratio reachable from ``state`` by reasonable play.

    ``memo`` may be shared across calls (it is keyed on the canonical state
    when ``canonicalize`` is on, on the raw masks otherwise); pass ``None``
    for a private one.
    """
    k = state.knowledge
    if k.n > EXACT_MAX_N:
        raise ValueError(f"exact state values are supported for n <= {EXACT_MAX_N}")
    search = _ValueSearch(search_context(k.n), {} if memo is None else memo, canonicalize, prune)
    return search.value(k.zeros, k.ones, state.questions_asked)


# ----------------------------------------------------------------- threshold engine

class _Threshold:
    """Largest affordable question count per canonical state, for one threshold c."""

    def __init__(self, ctx: SearchContext, c: Fraction, deadline: Optional[float] = None,
                 depth_limit: Optional[int] = None, stats: Optional[SearchStats] = None):
        self.ctx = ctx
        self.p, self.q = c.numerator, c.denominator
        self.memo: dict = {}
        self.deadline = deadline
        self.depth_limit = depth_limit
        self.stats = stats or SearchStats()

    def affordable(self, zeros: int, ones: int, depth: int = 0) -> int:
        """Max questions-asked q at this state such that every leaf ratio stays <= c.

        Past ``depth_limit`` the optimistic bound is returned instead, so the
        result never underestimates the true value.
        """
        ctx = self.ctx
        canon = ctx.canon(zeros, ones)
        cut = self.depth_limit is not None
        key = (canon, depth) if cut else canon
        hit = self.memo.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        st = self.stats
        st.states_expanded += 1
        if self.deadline is not None and st.states_expanded % 512 == 0 \
                and time.monotonic() > self.deadline:
            raise BudgetExceeded
        sizes, remaining, u = ctx.profile(*canon)
        cap = (self.p * sizes) // self.q
        upper = int((cap - remaining).min())
        lower = int(cap.min()) - u
        if upper == lower or (cut and depth >= self.depth_limit):
            result = upper
        else:
            result = None
            for _, c0, c1 in ctx.children(*canon):
                v0 = self.affordable(*c0, depth + 1) - 1
                if result is not None and v0 <= result:
                    continue
                v = min(v0, self.affordable(*c1, depth + 1) - 1)
                if result is None or v > result:
                    result = v
                    if result == upper:
                        break
        self.memo[key] = result
        return result

    def feasible(self) -> bool:
        return self.affordable(0, 0) >= 0

    def witness(self, zeros: int, ones: int, q: int) -> DecisionTree:
        """Tree keeping every leaf ratio <= c; smallest-mask question at each node."""
        ctx = self.ctx
        idx = ctx.consistent(zeros, ones)
        if idx.size == 1:
            return Leaf(MonotoneFn._trusted(ctx.n, int(ctx.tables[idx[0]])))
        for s in iter_bits(ctx.full & ~(zeros | ones)):
            c0 = (zeros | ctx.down[s], ones)
            c1 = (zeros, ones | ctx.up[s])
            if self.affordable(*c0) >= q + 1 and self.affordable(*c1) >= q + 1:
                return Node(s, self.witness(*c0, q + 1), self.witness(*c1, q + 1))
        raise AssertionError("no question keeps the threshold; value bookkeeping is wrong")


@dataclass
class SearchOutcome:
    n: int
    value: Optional[Fraction]
    tree: Optional[DecisionTree]
    lower: Fraction
    upper: Optional[Fraction]
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def exact(self) -> bool:
        return self.value is not None

    def to_json(self, timing: bool = False) -> dict:
        out = {"n": self.n, "exact": self.exact,
               "lower": ratio_str(self.lower),
               "upper": ratio_str(self.upper) if self.upper is not None else None,
               "stats": self.stats.to_json(timing)}
        if self.value is not None:
            out["value"] = ratio_str(self.value)
        return out


def compute_optimal(n: int, budget: Optional[float] = None) -> SearchOutcome:
    """c_n* with a witness tree; exact for n <= 4 (and n = 5 if the budget allows).

    If the time budget (seconds) runs out, the outcome carries the proven
    bracket ``lower <= c_n* <= upper`` and ``value`` is None.
    """
    check_n(n)
    if n > SEARCH_MAX_N:
        raise ValueError(f"optimal search supports n <= {SEARCH_MAX_N}; "
                         "use adversary_lower_bound for larger n")
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    ctx = search_context(n)
    candidates = ctx.candidate_ratios()
    stats = SearchStats()
    # invariant: candidates[hi] feasible; everything below lo infeasible
    lo, hi = 0, len(candidates) - 1
    engines: dict[int, _Threshold] = {}
    try:
        while lo < hi:
            mid = (lo + hi) // 2
            engine = _Threshold(ctx, candidates[mid], deadline, stats=stats)
            ok = engine.feasible()
            log.info("n=%d threshold %s: %s (%d states so far)", n, candidates[mid],
                     "feasible" if ok else "infeasible", stats.states_expanded)
            if ok:
                hi = mid
                engines[mid] = engine
            else:
                lo = mid + 1
    except BudgetExceeded:
        stats.elapsed = time.monotonic() - start
        upper = candidates[hi] if hi in engines else None
        return SearchOutcome(n, None, None, candidates[lo], upper, stats)
    value = candidates[lo]
    engine = engines.get(lo) or _Threshold(ctx, value, None, stats=stats)
    tree = engine.witness(0, 0, 0)
    stats.elapsed = time.monotonic() - start
    return SearchOutcome(n, value, tree, value, value, stats)


def adversary_lower_bound(n: int, depth: Optional[int] = None,
                          budget: Optional[float] = None) -> Fraction:
    """Certified lower bound on c_n*.

    Thresholds are tested with the algorithm's side cut off after ``depth``
    questions, where an optimistic bound stands in for the rest; a threshold
    that fails even so is a proven failure. The result is the smallest
    possible leaf ratio above the largest proven failure. Thresholds whose
    test exceeds the time budget count as unresolved.
    """
    check_n(n)
    ctx = search_context(n)
    candidates = ctx.candidate_ratios()
    deadline = None if budget is None else time.monotonic() + budget
    proven = -1
    lo, hi = 0, len(candidates) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        engine = _Threshold(ctx, candidates[mid], deadline, depth_limit=depth)
        try:
            ok = engine.feasible()
        except BudgetExceeded:
            log.info("n=%d threshold %s unresolved within budget", n, candidates[mid])
            hi = mid - 1
            if deadline is not None and time.monotonic() > deadline:
                break
            continue
        log.info("n=%d threshold %s: %s", n, candidates[mid], "open" if ok else "refuted")
        if ok:
            hi = mid - 1
        else:
            proven = max(proven, mid)
            lo = mid + 1
    if proven + 1 >= len(candidates):
        return candidates[-1]
    return candidates[proven + 1]


# ----------------------------------------------------------------- tree verification

@dataclass
class LeafAnnotation:
    """Figure-style leaf label: ``[c]`` when the function is pinned down,
    ``[u, k, c]`` otherwise (u undetermined sets, k the least remaining
    certificate size, c = (depth + u) / k)."""

    path: str
    depth: int
    unique: bool
    u: int
    k: int
    ratio: Fraction

    def label(self) -> str:
        c = _fmt(self.ratio)
        return f"[{c}]" if self.unique else f"[{self.u},{self.k},{c}]"


def _fmt(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


@dataclass
class TreeVerification:
    n: int
    complete: bool
    annotations: list[LeafAnnotation]
    unreasonable: list[str]
    report: Optional[CompetitivityReport]

    @property
    def max_ratio(self) -> Fraction:
        """Exact worst ratio for complete trees; for truncated trees the
        guaranteed bound over all reasonable completions."""
        if self.report is not None:
            return self.report.max_ratio
        return max(a.ratio for a in self.annotations)

    def to_json(self) -> dict:
        out = {"n": self.n, "complete": self.complete, "max_ratio": ratio_str(self.max_ratio),
               "leaves": [{"path": a.path, "label": a.label()} for a in self.annotations],
               "unreasonable_nodes": self.unreasonable}
        if self.report is not None:
            out["report"] = self.report.to_json()
        return out


def verify_tree(tree: DecisionTree, n: int) -> TreeVerification:
    """Independent check of a decision tree against every monotone function.

    Walks each root-to-leaf path collecting knowledge, labels leaves, flags
    questions that were deducible, and (for complete trees) replays every
    f in M_n through the tree. Raises :class:`ExactnessError` when some
    function is not reconstructed.
    """
    check_n(n)
    if n > ENUM_MAX_N:
        raise ValueError(f"tree verification supports n <= {ENUM_MAX_N}")
    tables = monotone_tables(n)
    sizes = certificate_sizes(tables, n)
    full = full_mask(n)
    ups, downs = up_masks(n), down_masks(n)
    annotations: list[LeafAnnotation] = []
    unreasonable: list[str] = []

    def walk(t: DecisionTree, zeros: int, ones: int, depth: int, path: str) -> None:
        z, o = np.uint64(zeros), np.uint64(ones)
        alive = ((tables & z) == 0) & ((tables & o) == o)
        count = int(np.count_nonzero(alive))
        if count == 0:
            return  # unreachable branch below a deducible question
        if isinstance(t, Node):
            known0, known1 = zeros >> t.question & 1, ones >> t.question & 1
            if known0 or known1:
                unreasonable.append(path)
            if not known1:
                walk(t.on_zero, zeros | downs[t.question], ones, depth + 1, path + "0")
            if not known0:
                walk(t.on_one, zeros, ones | ups[t.question], depth + 1, path + "1")
            return
        u = popcount(full & ~(zeros | ones))
        k = int(sizes[alive].min())
        if isinstance(t, Leaf):
            if count != 1 or int(tables[alive][0]) != t.function.table:
                raise ExactnessError(f"leaf at path {path!r} is not the unique consistent function")
            annotations.append(LeafAnnotation(path, depth, True, 0, k, Fraction(depth, k)))
        elif count == 1:
            annotations.append(LeafAnnotation(path, depth, True, 0, k, Fraction(depth, k)))
        else:
            annotations.append(LeafAnnotation(path, depth, False, u, k, Fraction(depth + u, k)))

    walk(tree, 0, 0, 0, "")
    complete = is_complete(tree)
    report = evaluate_competitivity(tree, n) if complete else None
    return TreeVerification(n, complete, annotations, unreasonable, report)


def complete_reasonably(tree: DecisionTree, n: int) -> DecisionTree:
    """Replace every open leaf by asking the remaining undetermined sets in mask order."""
    ups, downs = up_masks(n), down_masks(n)
    full = full_mask(n)
    ctx = search_context(n)

    def fill(zeros: int, ones: int) -> DecisionTree:
        idx = ctx.consistent(zeros, ones)
        if idx.size == 1:
            return Leaf(MonotoneFn._trusted(n, int(ctx.tables[idx[0]])))
        s = next(iter_bits(full & ~(zeros | ones)))
        return Node(s, fill(zeros | downs[s], ones), fill(zeros, ones | ups[s]))

    def go(t: DecisionTree, zeros: int, ones: int) -> DecisionTree:
        if isinstance(t, Node):
            return Node(t.question, go(t.on_zero, zeros | downs[t.question], ones),
                        go(t.on_one, zeros, ones | ups[t.question]))
        if isinstance(t, Open):
            return fill(zeros, ones)
        return t

    return go(tree, 0, 0)


def all_reasonable_trees(n: int) -> Iterator[DecisionTree]:
    """Every reasonable complete decision tree, by plain recursion (n <= 2 only)."""
    if n > 2:
        raise ValueError("full tree enumeration is only feasible for n <= 2")
    ctx = search_context(n)

    def trees(zeros: int, ones: int) -> list[DecisionTree]:
        idx = ctx.consistent(zeros, ones)
        if idx.size == 1:
            return [Leaf(MonotoneFn._trusted(n, int(ctx.tables[idx[0]])))]
        out = []
        for s in iter_bits(ctx.full & ~(zeros | ones)):
            lefts = trees(zeros | ctx.down[s], ones)
            rights = trees(zeros, ones | ctx.up[s])
            out.extend(Node(s, a, b) for a, b in itertools.product(lefts, rights))
        return out

    yield from trees(0, 0)


__all__ = [
    "BudgetExceeded",
    "LeafAnnotation",
    "SearchOutcome",
    "SearchState",
    "TreeVerification",
    "adversary_lower_bound",
    "all_reasonable_trees",
    "canonical_state",
    "certificate_lower_bound",
    "complete_reasonably",
    "compute_optimal",
    "state_value",
    "verify_tree",
]
