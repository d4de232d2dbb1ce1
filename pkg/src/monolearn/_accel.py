"""Backend selection for the permutation kernels.

The compiled extension is used when it imports cleanly; set
``MONOLEARN_PURE_PYTHON=1`` to force the fallback. Tables wider than 64 bits
(n > 6) always take the pure-Python big-integer path.
"""
from __future__ import annotations

import os
from functools import lru_cache

from . import _kernels_py
from ._bits import swap_schedule

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_KERNEL_MAX_N = 6

_impls = {"python": _kernels_py}
if _compiled is not None:
    _impls["compiled"] = _compiled

if _compiled is not None and os.environ.get("MONOLEARN_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "compiled"
else:
    BACKEND = "python"


def available_backends() -> list[str]:
    return sorted(_impls)


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previous one."""
    global BACKEND
    if name not in _impls:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    previous, BACKEND = BACKEND, name
    return previous


@lru_cache(maxsize=None)
def _schedule(backend: str, n: int):
    masks, shifts = swap_schedule(n)
    return _impls[backend].make_schedule(masks, shifts)


def _pick(n: int):
    backend = BACKEND if n <= _KERNEL_MAX_N else "python"
    return _impls[backend], _schedule(backend, n)


def canonical_table(table: int, n: int) -> int:
    """Smallest table over all relabelings of the n variables."""
    impl, sched = _pick(n)
    return int(impl.canonical_table(table, sched))


def canonical_pair(zeros: int, ones: int, n: int) -> tuple[int, int]:
    """Lexicographically smallest (zeros, ones) under a common relabeling."""
    impl, sched = _pick(n)
    z, o = impl.canonical_pair(zeros, ones, sched)
    return int(z), int(o)


def canonical_tables(tables, n: int):
    if n > _KERNEL_MAX_N:
        raise ValueError("batch canonicalization needs 64-bit tables (n <= 6)")
    impl, sched = _pick(n)
    return impl.canonical_tables(tables, sched)
