"""Bit-level helpers shared by every module.

A subset of ``{1..n}`` is an n-bit mask (element ``i`` is bit ``i-1``).
A truth table over the cube is a ``2**n``-bit integer whose bit ``S`` holds
the value at the subset with mask ``S``.
"""
from __future__ import annotations

from functools import lru_cache

MAX_N = 16


def check_n(n: int, cap: int = MAX_N) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"n must be an int, got {type(n).__name__}")
    if not 1 <= n <= cap:
        raise ValueError(f"n={n} outside supported range [1, {cap}]")


def popcount(x: int) -> int:
    return x.bit_count()


def full_mask(n: int) -> int:
    """Truth table with every point set."""
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def var_low_mask(n: int, i: int) -> int:
    """Points S (as table bits) with variable ``i`` (0-based) absent."""
    step = 1 << i
    block = ((1 << step) - 1)
    mask = 0
    for start in range(0, 1 << n, 2 * step):
        mask |= block << start
    return mask


def var_high_mask(n: int, i: int) -> int:
    return var_low_mask(n, i) << (1 << i)


def up_closure(n: int, table: int) -> int:
    """Smallest up-set containing ``table``."""
    for i in range(n):
        table |= (table & var_low_mask(n, i)) << (1 << i)
    return table


def down_closure(n: int, table: int) -> int:
    for i in range(n):
        table |= (table & var_high_mask(n, i)) >> (1 << i)
    return table


def is_up_closed(n: int, table: int) -> bool:
    for i in range(n):
        if ((table & var_low_mask(n, i)) << (1 << i)) & ~table:
            return False
    return True


def is_down_closed(n: int, table: int) -> bool:
    for i in range(n):
        if ((table & var_high_mask(n, i)) >> (1 << i)) & ~table:
            return False
    return True


def _point_closures(n: int, up: bool) -> list[int]:
    out = []
    for s in range(1 << n):
        out.append(up_closure(n, 1 << s) if up else down_closure(n, 1 << s))
    return out


@lru_cache(maxsize=12)
def up_masks(n: int) -> tuple[int, ...]:
    """``up_masks(n)[S]`` is the table of all supersets of S."""
    return tuple(_point_closures(n, True))


@lru_cache(maxsize=12)
def down_masks(n: int) -> tuple[int, ...]:
    return tuple(_point_closures(n, False))


def up_mask(n: int, s: int) -> int:
    if n <= 10:
        return up_masks(n)[s]
    return up_closure(n, 1 << s)


def down_mask(n: int, s: int) -> int:
    if n <= 10:
        return down_masks(n)[s]
    return down_closure(n, 1 << s)


def minimal_points(n: int, table: int) -> int:
    """Points of ``table`` none of whose one-smaller neighbours lie in ``table``."""
    covered = 0
    for i in range(n):
        covered |= (table & var_low_mask(n, i)) << (1 << i)
    return table & ~covered


def maximal_points(n: int, table: int) -> int:
    covered = 0
    for i in range(n):
        covered |= (table & var_high_mask(n, i)) >> (1 << i)
    return table & ~covered


def iter_bits(x: int):
    """Yield indices of set bits in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def set_to_str(s: int) -> str:
    return "{" + ",".join(str(i + 1) for i in iter_bits(s)) + "}"


def set_from_elements(elements) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << (e - 1)
    return mask


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs a positive argument")
    return (x - 1).bit_length()


@lru_cache(maxsize=None)
def sjt_swaps(n: int) -> tuple[int, ...]:
    """Adjacent transpositions (swap variable j with j+1) visiting all n! orders.

    Starting from the identity and applying the swaps one by one walks the
    Steinhaus-Johnson-Trotter sequence, so every permutation appears once.
    """
    perm = list(range(n))
    direction = [-1] * n
    swaps = []
    while True:
        mobile = -1
        pos = -1
        for idx, v in enumerate(perm):
            j = idx + direction[v]
            if 0 <= j < n and perm[j] < v and v > mobile:
                mobile, pos = v, idx
        if mobile < 0:
            break
        j = pos + direction[mobile]
        perm[pos], perm[j] = perm[j], perm[pos]
        swaps.append(min(pos, j))
        for v in range(mobile + 1, n):
            direction[v] = -direction[v]
    return tuple(swaps)


@lru_cache(maxsize=None)
def swap_schedule(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Delta-swap (masks, shifts) realizing :func:`sjt_swaps` on truth tables."""
    masks = []
    shifts = []
    for j in sjt_swaps(n):
        masks.append(var_high_mask(n, j) & var_low_mask(n, j + 1))
        shifts.append(1 << j)
    return tuple(masks), tuple(shifts)


def delta_swap(t: int, mask: int, shift: int) -> int:
    x = ((t >> shift) ^ t) & mask
    return t ^ x ^ (x << shift)
