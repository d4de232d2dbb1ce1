"""Pure-Python/numpy implementations of the hot permutation kernels.

Every function takes a schedule built by :func:`make_schedule` from the
delta swaps of :func:`monolearn._bits.swap_schedule`; walking the schedule
visits all n! variable relabelings of a truth table, one swap per step.
"""
from __future__ import annotations

import numpy as np


def make_schedule(masks, shifts):
    return tuple(zip(masks, shifts))


def canonical_table(table, sched):
    best = t = table
    for m, s in sched:
        x = ((t >> s) ^ t) & m
        t ^= x ^ (x << s)
        if t < best:
            best = t
    return best


def canonical_pair(zeros, ones, sched):
    bz, bo = zeros, ones
    z, o = zeros, ones
    for m, s in sched:
        x = ((z >> s) ^ z) & m
        z ^= x ^ (x << s)
        x = ((o >> s) ^ o) & m
        o ^= x ^ (x << s)
        if z < bz or (z == bz and o < bo):
            bz, bo = z, o
    return bz, bo


def canonical_tables(tables, sched):
    """Vectorized :func:`canonical_table` over a uint64 array."""
    t = np.array(tables, dtype=np.uint64, copy=True)
    best = t.copy()
    x = np.empty_like(t)
    for m, s in sched:
        m = np.uint64(m)
        s = np.uint64(s)
        np.right_shift(t, s, out=x)
        np.bitwise_xor(x, t, out=x)
        np.bitwise_and(x, m, out=x)
        np.bitwise_xor(t, x, out=t)
        np.left_shift(x, s, out=x)
        np.bitwise_xor(t, x, out=t)
        np.minimum(best, t, out=best)
    return best
