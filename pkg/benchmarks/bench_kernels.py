"""Compare the compiled kernel backend against the pure numpy fallback.

Times the individual kernels on representative shapes and whole GA runs
on the benchmark problems, printing one table row per case.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from popsize_lab import kernels
from popsize_lab.engine import run_ga
from popsize_lab.problems import onemax, trap4
from popsize_lab.strategies import SizingStrategy
from popsize_lab.theory import TheoryParams, WalkSpec, simulate_walk


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases():
    rng = np.random.default_rng(0)
    n, m = 400, 80
    table = trap4(m).table
    configs = rng.integers(0, 16, (n, m), dtype=np.int64)
    keys = rng.integers(0, 2**32, (n, m), dtype=np.uint32)
    fitness = rng.random(n)
    perm = rng.permutation(n).astype(np.int64)
    tie = rng.random(n // 2)

    yield "evaluate_configs (400x80)", lambda k: k.evaluate_configs(table, configs)
    yield "bb_counts (400x80)", lambda k: k.bb_counts(configs, 15)
    yield "tournament_pass (400)", lambda k: k.tournament_pass(fitness, perm, tie)
    yield "shuffle_columns (400x80)", lambda k: k.shuffle_columns(configs, keys)


def backend_module(name):
    if name == "cython":
        from popsize_lab.kernels import _core
        return _core
    from popsize_lab.kernels import _fallback
    return _fallback


def ga_case(problem, kind):
    params = TheoryParams.from_problem(problem, 0.05)
    strategy = SizingStrategy(kind, params)
    return lambda: run_ga(problem, strategy, seed=1)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':<38}" + "".join(f"{b:>12}" for b in backends) + f"{'ratio':>8}")

    for label, fn in kernel_cases():
        times = {b: timeit(lambda: fn(backend_module(b)), 50 * args.repeats)
                 for b in backends}
        ratio = times["fallback"] / times["cython"] if "cython" in times else 1.0
        print(f"{label:<38}"
              + "".join(f"{times[b] * 1e6:>10.1f}us" for b in backends)
              + f"{ratio:>7.1f}x")

    ga_cases = [("run_ga onemax 400 static", ga_case(onemax(400), "static")),
                ("run_ga trap4 m=80 static", ga_case(trap4(80), "static")),
                ("run_ga trap4 m=80 varfit-supply",
                 ga_case(trap4(80), "varfit_supply")),
                ("simulate_walk n=418 10^5 trials",
                 lambda: simulate_walk(WalkSpec(n=418, x0=26, p=0.56),
                                       10**5, seed=2))]
    original = kernels.BACKEND
    try:
        for label, fn in ga_cases:
            times = {}
            for b in backends:
                kernels.set_backend(b)
                times[b] = timeit(fn, args.repeats)
            ratio = times["fallback"] / times["cython"] if "cython" in times else 1.0
            print(f"{label:<38}"
                  + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
                  + f"{ratio:>7.1f}x")
    finally:
        kernels.set_backend(original)


if __name__ == "__main__":
    main()
