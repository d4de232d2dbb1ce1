"""Exhaustive generation of monotone Boolean functions for small n.

All bulk work runs on sorted ``uint64`` arrays of truth tables; the
``enumerate_*`` generators wrap them into :class:`MonotoneFn` lazily.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator

import numpy as np

from . import _accel
from ._bits import check_n, full_mask, var_high_mask, var_low_mask
from .core import MonotoneFn

ENUM_MAX_N = 6

DEDEKIND = {
    1: 3,
    2: 6,
    3: 20,
    4: 168,
    5: 7581,
    6: 7828354,
    7: 2414682040998,
    8: 56130437228687557907788,
}
# literature values, never recomputed here
LITERATURE_ONLY = frozenset({7, 8})

INEQUIVALENT = {1: 3, 2: 5, 3: 10, 4: 30, 5: 210, 6: 16353}


def _check_enum_n(n: int) -> None:
    check_n(n)
    if n > ENUM_MAX_N:
        raise ValueError(f"enumeration supports n <= {ENUM_MAX_N}, got n={n}")


def _monotone_filter(tables: np.ndarray, n: int) -> np.ndarray:
    ok = np.ones(tables.shape, dtype=bool)
    for i in range(n):
        lo = np.uint64(var_low_mask(n, i))
        shifted = (tables & lo) << np.uint64(1 << i)
        ok &= (shifted & ~tables) == 0
    return ok


@lru_cache(maxsize=ENUM_MAX_N)
def monotone_tables(n: int) -> np.ndarray:
    """Sorted uint64 array of every monotone truth table on n variables (read-only)."""
    _check_enum_n(n)
    if n <= 4:
        everything = np.arange(1 << (1 << n), dtype=np.uint64)
        out = everything[_monotone_filter(everything, n)]
    else:
        # f = (f restricted to "n absent", f restricted to "n present"), lower <= upper
        prev = monotone_tables(n - 1)
        half = np.uint64(1 << (n - 1))
        parts = []
        for upper in prev:
            lowers = prev[(prev & ~upper) == 0]
            parts.append(lowers | (upper << half))
        out = np.concatenate(parts)
    out.setflags(write=False)
    return out


def enumerate_all(n: int) -> Iterator[MonotoneFn]:
    """Every monotone function on n variables, ascending by truth table."""
    tables = monotone_tables(n)
    make = MonotoneFn._trusted
    for t in tables.tolist():
        yield make(n, t)


def count_all(n: int, with_source: bool = False):
    """Dedekind number M(n); n <= 6 counted, n = 7, 8 from the literature table.

    With ``with_source=True`` returns ``(count, "computed" | "literature")``.
    """
    check_n(n)
    if n <= ENUM_MAX_N:
        value, source = int(monotone_tables(n).size), "computed"
    elif n in DEDEKIND:
        value, source = DEDEKIND[n], "literature"
    else:
        raise ValueError(f"Dedekind number for n={n} is unknown")
    return (value, source) if with_source else value


@lru_cache(maxsize=ENUM_MAX_N)
def canonical_tables(n: int) -> np.ndarray:
    """Sorted distinct canonical forms (one per relabeling orbit)."""
    _check_enum_n(n)
    canon = _accel.canonical_tables(monotone_tables(n), n)
    out = np.unique(canon)
    out.setflags(write=False)
    return out


def enumerate_inequivalent(n: int) -> Iterator[MonotoneFn]:
    make = MonotoneFn._trusted
    for t in canonical_tables(n).tolist():
        yield make(n, t)


def certificate_point_masks(tables: np.ndarray, n: int) -> np.ndarray:
    """Vectorized U-points | L-points for an array of monotone tables (n <= 6)."""
    tables = np.asarray(tables, dtype=np.uint64)
    full = np.uint64(full_mask(n))
    zeros = ~tables & full
    up_cover = np.zeros_like(tables)
    down_cover = np.zeros_like(tables)
    for i in range(n):
        shift = np.uint64(1 << i)
        up_cover |= (tables & np.uint64(var_low_mask(n, i))) << shift
        down_cover |= (zeros & np.uint64(var_high_mask(n, i))) >> shift
    return (tables & ~up_cover) | (zeros & ~down_cover)


def certificate_sizes(tables: np.ndarray, n: int) -> np.ndarray:
    """Vectorized m(f) = |U| + |L|."""
    return np.bitwise_count(certificate_point_masks(tables, n)).astype(np.int64)


@dataclass
class BProfile:
    """``counts[i]`` is the number of functions with certificate size i."""

    n: int
    counts: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())

    def merge(self, other: "BProfile") -> "BProfile":
        if other.n != self.n:
            raise ValueError("cannot merge profiles for different n")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return BProfile(self.n, dict(sorted(merged.items())))

    def cumulative(self, i: int) -> int:
        return sum(v for k, v in self.counts.items() if k <= i)

    def to_json(self) -> dict:
        return {"n": self.n, "counts": {str(k): v for k, v in sorted(self.counts.items())},
                "total": self.total()}


@lru_cache(maxsize=ENUM_MAX_N)
def _b_profile(n: int) -> tuple[tuple[int, int], ...]:
    sizes = certificate_sizes(monotone_tables(n), n)
    values, counts = np.unique(sizes, return_counts=True)
    return tuple((int(v), int(c)) for v, c in zip(values, counts))


def b_profile(n: int) -> BProfile:
    _check_enum_n(n)
    return BProfile(n, dict(_b_profile(n)))


def b_closed_form(i: int, n: int) -> int:
    """b_1..b_4 in closed form, valid for any n."""
    check_n(n)
    forms = {1: lambda: 2, 2: lambda: n, 3: lambda: 2 * comb(n, 2), 4: lambda: 8 * comb(n, 3)}
    if i not in forms:
        raise ValueError("closed forms exist only for i = 1..4")
    return forms[i]()
