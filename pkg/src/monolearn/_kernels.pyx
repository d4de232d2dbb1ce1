# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled permutation kernels for truth tables of up to 64 points (n <= 6)."""
import numpy as np

from libc.stdint cimport uint64_t


cdef inline uint64_t _dswap(uint64_t t, uint64_t m, uint64_t s) noexcept nogil:
    cdef uint64_t x = ((t >> s) ^ t) & m
    return t ^ x ^ (x << s)


cdef class Schedule:
    cdef uint64_t[::1] masks
    cdef uint64_t[::1] shifts
    cdef Py_ssize_t steps

    def __init__(self, masks, shifts):
        self.steps = len(masks)
        self.masks = np.array(masks, dtype=np.uint64)
        self.shifts = np.array(shifts, dtype=np.uint64)


def make_schedule(masks, shifts):
    return Schedule(masks, shifts)


def canonical_table(uint64_t table, Schedule sched):
    cdef Py_ssize_t k
    cdef uint64_t t = table, best = table
    with nogil:
        for k in range(sched.steps):
            t = _dswap(t, sched.masks[k], sched.shifts[k])
            if t < best:
                best = t
    return best


def canonical_pair(uint64_t zeros, uint64_t ones, Schedule sched):
    cdef Py_ssize_t k
    cdef uint64_t z = zeros, o = ones, bz = zeros, bo = ones
    with nogil:
        for k in range(sched.steps):
            z = _dswap(z, sched.masks[k], sched.shifts[k])
            o = _dswap(o, sched.masks[k], sched.shifts[k])
            if z < bz or (z == bz and o < bo):
                bz = z
                bo = o
    return bz, bo


def canonical_tables(tables, Schedule sched):
    cdef Py_ssize_t i, k
    src = np.ascontiguousarray(tables, dtype=np.uint64)
    out = np.empty_like(src)
    cdef const uint64_t[::1] tv = src
    cdef uint64_t[::1] ov = out
    cdef uint64_t t, best
    with nogil:
        for i in range(tv.shape[0]):
            t = tv[i]
            best = t
            for k in range(sched.steps):
                t = _dswap(t, sched.masks[k], sched.shifts[k])
                if t < best:
                    best = t
            ov[i] = best
    return out
