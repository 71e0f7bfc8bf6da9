"""Compare the compiled and pure-Python ranking kernels.

Builds a random sparse world roughly the shape of a 5-core Amazon category
(L2-normalised item rows, user histories, K + 1 items per case), checks that
both backends return identical ranks and reports the best-of-N wall time.

    python benchmarks/bench_kernels.py --items 18000 --cases 70000
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from minrev import kernels


def make_world(rng, n_items, n_terms, terms_per_item, n_users, hist_len, n_cases, width):
    lengths = rng.integers(1, 2 * terms_per_item, size=n_items)
    indptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    indices = np.empty(indptr[-1], dtype=np.int64)
    for r in range(n_items):
        indices[indptr[r]:indptr[r + 1]] = np.sort(rng.choice(n_terms, size=lengths[r], replace=False))
    data = rng.exponential(1.0, size=indptr[-1])
    for r in range(n_items):
        row = data[indptr[r]:indptr[r + 1]]
        row /= np.sqrt(row @ row)
    hists = [np.sort(rng.choice(n_items, size=rng.integers(1, 2 * hist_len), replace=False)) for _ in range(n_users)]
    hist_ptr = np.concatenate([[0], np.cumsum([len(h) for h in hists])]).astype(np.int64)
    hist_rows = np.concatenate(hists).astype(np.int64)
    case_user = np.sort(rng.integers(0, n_users, size=n_cases)).astype(np.int64)
    case_rows = np.stack([rng.choice(n_items, size=width, replace=False) for _ in range(n_cases)]).astype(np.int64)
    return indptr, indices, data, n_terms, hist_ptr, hist_rows, case_user, case_rows


def best_time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--items", type=int, default=2500)
    p.add_argument("--terms", type=int, default=20000)
    p.add_argument("--terms-per-item", type=int, default=300)
    p.add_argument("--users", type=int, default=5000)
    p.add_argument("--history", type=int, default=7)
    p.add_argument("--cases", type=int, default=10000)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    world = make_world(rng, args.items, args.terms, args.terms_per_item, args.users, args.history, args.cases, args.k + 1)
    print(f"{args.cases} cases x {args.k + 1} items, {args.items} items, {world[0][-1]} non-zeros, {args.users} users")
    results = {}
    for name in sorted(kernels.BACKENDS):
        seconds, ranks = best_time(kernels.BACKENDS[name], world, args.repeat)
        results[name] = (seconds, ranks)
        print(f"{name:>7}: {seconds:8.3f} s  ({args.cases / seconds:,.0f} cases/s)")
    if len(results) == 2:
        (_, a), (_, b) = results.values()
        assert np.array_equal(a, b), "backends disagree"
        print(f"speed-up: {results['python'][0] / results['cython'][0]:.1f}x (ranks identical)")
    else:
        print("compiled kernel not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
