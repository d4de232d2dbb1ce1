"""Value types and combinatorics for subsets, monotone truth tables and antichains."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from . import _accel
from ._bits import (
    MAX_N,
    check_n,
    full_mask,
    is_up_closed,
    iter_bits,
    maximal_points,
    minimal_points,
    popcount,
    set_to_str,
    up_closure,
    down_closure,
)

CANONICAL_MAX_N = 8


@dataclass(frozen=True, order=True)
class ElementSet:
    """A subset of ``{1..n}`` stored as an n-bit mask."""

    bits: int
    n: int

    def __post_init__(self):
        check_n(self.n)
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"mask {self.bits} out of range for n={self.n}")

    @classmethod
    def of(cls, elements: Iterable[int], n: int) -> "ElementSet":
        bits = 0
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"element {e} not in 1..{n}")
            bits |= 1 << (e - 1)
        return cls(bits, n)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in iter_bits(self.bits))

    def __len__(self) -> int:
        return popcount(self.bits)

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.n and bool(self.bits >> (element - 1) & 1)

    def issubset(self, other: "ElementSet") -> bool:
        return self.bits & other.bits == self.bits

    def __str__(self) -> str:
        return set_to_str(self.bits)


SetLike = Union[ElementSet, int, Iterable[int]]


def _as_mask(s: SetLike, n: int) -> int:
    if isinstance(s, ElementSet):
        if s.n != n:
            raise ValueError(f"set over n={s.n} used with n={n}")
        return s.bits
    if isinstance(s, int):
        if not 0 <= s < (1 << n):
            raise ValueError(f"mask {s} out of range for n={n}")
        return s
    return ElementSet.of(s, n).bits


def is_monotone(table: int, n: int) -> bool:
    """True iff the truth table is closed upward along every single-element extension."""
    check_n(n)
    if not 0 <= table <= full_mask(n):
        raise ValueError(f"table has more than 2**{n} bits")
    return is_up_closed(n, table)


class MonotoneFn:
    """Monotone Boolean function on ``n`` variables, as a ``2**n``-bit truth table.

    Bit ``S`` of ``table`` is ``f(S)`` where ``S`` is the subset mask. Instances
    are immutable and hashable; constructing from a non-monotone table raises.
    """

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: int):
        if not is_monotone(table, n):
            raise ValueError(f"table {table:#x} is not monotone on {n} variables")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", table)

    @classmethod
    def _trusted(cls, n: int, table: int) -> "MonotoneFn":
        # skips validation; only for tables produced by the enumerators
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "table", table)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("MonotoneFn is immutable")

    @classmethod
    def zero(cls, n: int) -> "MonotoneFn":
        check_n(n)
        return cls._trusted(n, 0)

    @classmethod
    def one(cls, n: int) -> "MonotoneFn":
        check_n(n)
        return cls._trusted(n, full_mask(n))

    def __call__(self, s: SetLike) -> int:
        return (self.table >> _as_mask(s, self.n)) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneFn):
            return NotImplemented
        return self.n == other.n and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.n, self.table))

    def __lt__(self, other: "MonotoneFn") -> bool:
        return (self.n, self.table) < (other.n, other.table)

    def __le__(self, other: "MonotoneFn") -> bool:
        """Pointwise order."""
        return self.n == other.n and self.table & ~other.table == 0

    def __repr__(self) -> str:
        return f"MonotoneFn(n={self.n}, table=0x{to_hex(self)})"

    def __reduce__(self):
        return (MonotoneFn._trusted, (self.n, self.table))


def to_hex(f: MonotoneFn) -> str:
    """Truth table as hex, most significant nibble first, ceil(2**n / 4) digits."""
    digits = max(1, (1 << f.n) // 4)
    return format(f.table, f"0{digits}x")


def from_hex(text: str, n: int) -> MonotoneFn:
    check_n(n)
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    digits = max(1, (1 << n) // 4)
    if len(text) != digits:
        raise ValueError(f"expected {digits} hex digits for n={n}, got {len(text)}")
    return MonotoneFn(n, int(text, 16))


@dataclass(frozen=True)
class Antichain:
    """Pairwise incomparable subsets of ``{1..n}``, kept as sorted masks."""

    n: int
    masks: tuple[int, ...]

    def __post_init__(self):
        check_n(self.n)
        ms = tuple(sorted(set(self.masks)))
        for a in ms:
            if not 0 <= a < (1 << self.n):
                raise ValueError(f"mask {a} out of range for n={self.n}")
        for i, a in enumerate(ms):
            for b in ms[i + 1:]:
                if a & b == a or a & b == b:
                    raise ValueError(f"{set_to_str(a)} and {set_to_str(b)} are comparable")
        object.__setattr__(self, "masks", ms)

    @classmethod
    def of(cls, sets: Iterable[SetLike], n: int) -> "Antichain":
        return cls(n, tuple(_as_mask(s, n) for s in sets))

    @classmethod
    def _from_points(cls, n: int, points: int) -> "Antichain":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "masks", tuple(iter_bits(points)))
        return obj

    def __iter__(self) -> Iterator[ElementSet]:
        return (ElementSet(m, self.n) for m in self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, s: SetLike) -> bool:
        return _as_mask(s, self.n) in self.masks

    def points(self) -> int:
        """The members as a truth-table mask."""
        out = 0
        for m in self.masks:
            out |= 1 << m
        return out

    def __str__(self) -> str:
        return "{" + ", ".join(set_to_str(m) for m in self.masks) + "}"


def minimal_upper_sets(f: MonotoneFn) -> Antichain:
    return Antichain._from_points(f.n, minimal_points(f.n, f.table))


def maximal_lower_sets(f: MonotoneFn) -> Antichain:
    zeros = full_mask(f.n) & ~f.table
    return Antichain._from_points(f.n, maximal_points(f.n, zeros))


def certificate_points(f: MonotoneFn) -> int:
    """Points of the minimal upper and maximal lower sets, as one table mask."""
    zeros = full_mask(f.n) & ~f.table
    return minimal_points(f.n, f.table) | maximal_points(f.n, zeros)


def certificate_size(f: MonotoneFn) -> int:
    """|U| + |L|; the two antichains are disjoint since their values differ."""
    return popcount(certificate_points(f))


def from_upper_antichain(sets: Union[Antichain, Iterable[SetLike]], n: int) -> MonotoneFn:
    if not isinstance(sets, Antichain):
        sets = Antichain.of(sets, n)
    elif sets.n != n:
        raise ValueError(f"antichain over n={sets.n} used with n={n}")
    return MonotoneFn._trusted(n, up_closure(n, sets.points()))


def from_lower_antichain(sets: Union[Antichain, Iterable[SetLike]], n: int) -> MonotoneFn:
    if not isinstance(sets, Antichain):
        sets = Antichain.of(sets, n)
    elif sets.n != n:
        raise ValueError(f"antichain over n={sets.n} used with n={n}")
    return MonotoneFn._trusted(n, full_mask(n) & ~down_closure(n, sets.points()))


def lift(f: MonotoneFn) -> MonotoneFn:
    """Extend to n+1 variables so that the new variable is irrelevant."""
    if f.n + 1 > MAX_N:
        raise ValueError(f"cannot lift beyond n={MAX_N}")
    return MonotoneFn._trusted(f.n + 1, f.table | (f.table << (1 << f.n)))


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``{1..n}``: ``mapping[i-1]`` is the image of ``i``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(1, len(mapping) + 1)):
            raise ValueError(f"{mapping} is not a bijection on 1..{len(mapping)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, s: int) -> int:
        """Image of a subset mask."""
        out = 0
        for i in iter_bits(s):
            out |= 1 << (self.mapping[i] - 1)
        return out

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.mapping):
            inv[j - 1] = i + 1
        return Permutation(tuple(inv))


def compose(tau: Permutation, sigma: Permutation) -> Permutation:
    """``tau ∘ sigma``: apply sigma first."""
    if tau.n != sigma.n:
        raise ValueError("permutations act on different n")
    return Permutation(tuple(tau.mapping[j - 1] for j in sigma.mapping))


def permute_table(table: int, n: int, sigma: Permutation) -> int:
    """Table of g with g(sigma(S)) = table(S)."""
    out = 0
    for s in iter_bits(table):
        out |= 1 << sigma(s)
    return out


def apply_permutation(f: MonotoneFn, sigma: Permutation) -> MonotoneFn:
    if sigma.n != f.n:
        raise ValueError(f"permutation on {sigma.n} elements applied to n={f.n}")
    return MonotoneFn._trusted(f.n, permute_table(f.table, f.n, sigma))


def canonical_form(f: MonotoneFn) -> MonotoneFn:
    """Representative of f's relabeling class with the numerically smallest table."""
    if f.n > CANONICAL_MAX_N:
        raise ValueError(f"exact canonicalization supports n <= {CANONICAL_MAX_N}, got {f.n}")
    return MonotoneFn._trusted(f.n, _accel.canonical_table(f.table, f.n))


def points_to_sets(n: int, points: int) -> list[ElementSet]:
    return [ElementSet(s, n) for s in iter_bits(points)]


def describe(f: MonotoneFn) -> str:
    """Short human form, e.g. ``U={3} L={1,2}``."""
    return f"U={minimal_upper_sets(f)} L={maximal_lower_sets(f)}"


__all__ = [
    "Antichain",
    "ElementSet",
    "MonotoneFn",
    "Permutation",
    "apply_permutation",
    "canonical_form",
    "certificate_points",
    "certificate_size",
    "compose",
    "describe",
    "from_hex",
    "from_lower_antichain",
    "from_upper_antichain",
    "is_monotone",
    "lift",
    "maximal_lower_sets",
    "minimal_upper_sets",
    "permute_table",
    "points_to_sets",
    "to_hex",
]
