#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Workloads are the two enumeration-heavy paths: axiom-suite verification on
the partial-program model (dominated by the four-element-variable axiom,
531441 instances) and the brute-force equality-test search.

Usage:
    python benchmarks/bench_backends.py [--repeat N] [--star-size N]
"""

from __future__ import annotations

import argparse
import time

from itealg import decision, kernels, models, terms


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_suite(model, suite, backend, repeat):
    return timed(lambda: decision.verify_axiom_suite(model, suite, backend=backend), repeat)


def bench_statement(stmt, model, backend, repeat):
    return timed(lambda: decision.check_statement_on_model(stmt, model, backend=backend), repeat)


def bench_star(size, backend, repeat):
    return timed(lambda: kernels.star_search(size, backend=backend), repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--star-size", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"]
    if kernels.numba_available():
        backends.append("numba")
        # compile outside the timed region
        kernels.star_search(2, backend="numba")
        decision.check_statement_on_model(
            terms.parse("U[s,t] = bot"), models.basic_cset(2), backend="numba"
        )
    else:
        print("numba unavailable; benchmarking the numpy path only")

    fn2 = models.functional_cset(2)
    ec2 = terms.parse("a[b[s,t],b[u,v]] = b[a[s,u],a[t,v]]")

    rows = []
    for backend in backends:
        rows.append((f"suite cset on functional:2 [{backend}]",
                     bench_suite(fn2, "cset", backend, args.repeat)))
        rows.append((f"premise-interchange axiom alone [{backend}]",
                     bench_statement(ec2, fn2, backend, args.repeat)))
        rows.append((f"star search size {args.star_size} [{backend}]",
                     bench_star(args.star_size, backend, args.repeat)))

    width = max(len(r[0]) for r in rows)
    print(f"\nbest of {args.repeat}:")
    for label, seconds in rows:
        print(f"  {label:<{width}}  {seconds * 1000:9.2f} ms")
    if len(backends) == 2:
        print("\nspeedups (numpy / numba):")
        half = len(rows) // 2
        for (label_np, np_s), (_, nb_s) in zip(rows[:half], rows[half:]):
            name = label_np.replace(" [numpy]", "")
            print(f"  {name:<{width}}  {np_s / nb_s:6.2f}x")


if __name__ == "__main__":
    main()
