#!/usr/bin/env python3
"""Measure crossfilter refresh latency on synthetic tables.

One refresh = apply a three-range filter, then recompute the histogram of
every dimension, which is the work one slider drag triggers. Prints the
median, p90, and max over --trials refreshes for each table size.
"""

import argparse
import statistics
import time

import numpy as np

from runviz import FilterState, apply_filters, histogram
from runviz.fixtures import load_fixture


def bench(runs: int, dims: int, trials: int, seed: int = 3) -> dict:
    table = load_fixture("synthetic", runs=runs, seed=seed, dims=dims)
    names = [d.name for d in table.dimensions]
    rng = np.random.default_rng(seed)
    timings = []
    for _ in range(trials):
        f = FilterState()
        for name in rng.choice(names, size=min(3, dims), replace=False):
            lo, hi = sorted(rng.uniform(0.0, 1.0, size=2))
            f = f.with_range(str(name), float(lo), float(hi))
        started = time.perf_counter()
        apply_filters(table, f)
        for name in names:
            histogram(table, name, f)
        timings.append(time.perf_counter() - started)
    timings.sort()
    return {
        "median": statistics.median(timings),
        "p90": timings[int(0.9 * (len(timings) - 1))],
        "max": timings[-1],
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument(
        "--sizes",
        default="500x20,1000x30,5000x30,10000x50",
        help="comma list of RUNSxDIMS pairs",
    )
    args = parser.parse_args()

    print(f"{'runs':>7} {'dims':>5} {'median':>10} {'p90':>10} {'max':>10}")
    for size in args.sizes.split(","):
        runs, dims = (int(p) for p in size.lower().split("x"))
        stats = bench(runs, dims, args.trials)
        print(
            f"{runs:>7} {dims:>5}"
            f" {stats['median'] * 1000:>8.2f}ms"
            f" {stats['p90'] * 1000:>8.2f}ms"
            f" {stats['max'] * 1000:>8.2f}ms"
        )


if __name__ == "__main__":
    main()
