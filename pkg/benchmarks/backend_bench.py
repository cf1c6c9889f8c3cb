#!/usr/bin/env python3
"""Compare the compiled and pure-Python simulation kernels.

Runs identical full-horizon simulations on both backends, reports wall
time per run and the speedup, and verifies the results are bit-identical.

    python3 benchmarks/backend_bench.py [--runs 3] [--horizon-s 400]
"""

import argparse
import time

import numpy as np

from swarmcdm import world
from swarmcdm.engine import get_kernels
from swarmcdm.engine.simulation import run_once
from swarmcdm.mechanisms import majority_rule


def time_backend(backend, runs, horizon_s):
    records = []
    elapsed = []
    for k in range(runs):
        grid = world.generate_pattern(0.25, world.WHITE, np.random.default_rng(k))
        opinions = [1] * 10 + [0] * 10
        start = time.perf_counter()
        rec = run_once(grid, opinions, majority_rule, seed=k,
                       horizon_s=horizon_s, stop_at_consensus=False,
                       collect_log=False, backend=backend)
        elapsed.append(time.perf_counter() - start)
        records.append(rec)
    return records, elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=3)
    parser.add_argument("--horizon-s", type=float, default=400.0)
    args = parser.parse_args()

    for backend in ("compiled", "python"):
        name = get_kernels(backend).BACKEND
        print(f"backend '{backend}' resolves to: {name}")

    compiled, t_compiled = time_backend("compiled", args.runs, args.horizon_s)
    pure, t_pure = time_backend("python", args.runs, args.horizon_s)

    identical = all(a == b for a, b in zip(compiled, pure))
    mean_c = sum(t_compiled) / len(t_compiled)
    mean_p = sum(t_pure) / len(t_pure)
    print(f"compiled: {mean_c:.3f} s/run over {args.runs} runs")
    print(f"python:   {mean_p:.3f} s/run over {args.runs} runs")
    print(f"speedup:  {mean_p / mean_c:.1f}x")
    print(f"records bit-identical across backends: {identical}")
    if not identical:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
