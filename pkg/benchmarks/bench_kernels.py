"""Compare the compiled and pure-Python canonicalization kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--batch 100000]

Each row is the best of ``--repeat`` runs. The "search" rows time a full
``state_value`` at n = 4 with a fresh memo, which is dominated by
canonical_pair calls.
"""
import argparse
import time

import numpy as np

from monolearn import _accel
from monolearn.enumeration import monotone_tables
from monolearn.oracle import PartialKnowledge
from monolearn.optsearch import SearchState, state_value


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def scalar_tables(tables, n):
    for t in tables:
        _accel.canonical_table(t, n)


def scalar_pairs(pairs, n):
    for z, o in pairs:
        _accel.canonical_pair(z, o, n)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--batch", type=int, default=100_000, help="n=6 tables in the batch row")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    t5 = monotone_tables(5)
    t6 = rng.choice(monotone_tables(6), args.batch)
    scalars = t5[:2000].tolist()
    pairs = []
    for t in scalars:
        k = PartialKnowledge.empty(5)
        for s in rng.choice(32, 4, replace=False).tolist():
            k = k.with_answer(s, t >> s & 1)
        pairs.append((k.zeros, k.ones))

    cases = [
        ("canonical_table x2000 (n=5)", lambda: scalar_tables(scalars, 5)),
        ("canonical_pair x2000 (n=5)", lambda: scalar_pairs(pairs, 5)),
        ("batch all of M_5 (7581)", lambda: _accel.canonical_tables(t5, 5)),
        (f"batch {args.batch} of M_6", lambda: _accel.canonical_tables(t6, 6)),
        ("state_value n=4, fresh memo", lambda: state_value(SearchState.initial(4), memo={})),
    ]
    backends = _accel.available_backends()
    results = {}
    for name in backends:
        previous = _accel.set_backend(name)
        try:
            results[name] = [best_of(args.repeat, fn) for _, fn in cases]
        finally:
            _accel.set_backend(previous)

    width = max(len(label) for label, _ in cases)
    header = f"{'case':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for i, (label, _) in enumerate(cases):
        row = f"{label:<{width}}  " + "  ".join(f"{results[b][i]:>9.4f}s" for b in backends)
        if len(backends) == 2:
            row += f"  {results['python'][i] / results['compiled'][i]:>7.1f}x"
        print(row)
    if "compiled" not in backends:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
