"""Benchmark the jit-compiled hot kernels against their numpy fallbacks.

Three sections: the dense shortest-path solve, the elementwise latency
perturbation, and an end-to-end gamma series (the latter in subprocesses,
because the backend is fixed at import time via GAMMACHAIN_NO_NUMBA). Each
section asserts that both backends produce bit-identical output before
reporting timings, so a speedup never hides a divergence.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--steps N] [--repeats R]
"""

from __future__ import annotations

import argparse
import hashlib
import os
import subprocess
import sys
import time

import numpy as np

from gammachain._kernels import (
    NUMBA_ENABLED,
    dijkstra_numba,
    dijkstra_numpy,
    perturb_numba,
    perturb_numpy,
)
from gammachain.network import init_network

SERIES_SNIPPET = """
import hashlib, time
import numpy as np
from gammachain.network import simulate_gamma_series
schedule = np.arange({steps}, dtype=float)
simulate_gamma_series(schedule[: min(8, {steps})], seed=1)
start = time.perf_counter()
series = simulate_gamma_series(schedule, seed=3)
elapsed = time.perf_counter() - start
digest = hashlib.sha256(np.asarray(series.values).tobytes()).hexdigest()
print(f"{{elapsed:.6f}} {{digest}}")
"""


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_dijkstra(repeats: int) -> None:
    state = init_network(seed=11)
    weights = np.array(state.weights)
    sources = range(state.node_count)
    out_jit = np.stack([dijkstra_numba(weights, s) for s in sources])
    out_np = np.stack([dijkstra_numpy(weights, s) for s in sources])
    assert np.array_equal(out_jit, out_np), "dijkstra backends diverged"

    t_jit = _time(lambda: [dijkstra_numba(weights, s) for s in sources], repeats)
    t_np = _time(lambda: [dijkstra_numpy(weights, s) for s in sources], repeats)
    print(f"dijkstra (100 nodes, all sources): numba {t_jit * 1e3:8.2f} ms"
          f"   numpy {t_np * 1e3:8.2f} ms   speedup {t_np / t_jit:5.1f}x")


def bench_perturb(repeats: int) -> None:
    rng = np.random.default_rng(5)
    n = 4950
    prev = rng.uniform(1.0, 400.0, n)
    prev[rng.random(n) < 0.1] = 1e7
    mean = rng.uniform(6.0, 325.0, n)
    omega_sum = rng.uniform(0.0, 0.4, n)
    u0 = rng.standard_normal(n)
    u1 = rng.standard_normal(n)
    active = rng.random(n) < 0.9

    out_jit = perturb_numba(prev, mean, omega_sum, u0, u1, 1.0, active)
    out_np = perturb_numpy(prev, mean, omega_sum, u0, u1, 1.0, active)
    assert np.array_equal(out_jit, out_np), "perturb backends diverged"

    loops = 200
    t_jit = _time(
        lambda: [perturb_numba(prev, mean, omega_sum, u0, u1, 1.0, active) for _ in range(loops)],
        repeats,
    )
    t_np = _time(
        lambda: [perturb_numpy(prev, mean, omega_sum, u0, u1, 1.0, active) for _ in range(loops)],
        repeats,
    )
    print(f"perturb (4950 pairs, {loops} calls):  numba {t_jit * 1e3:8.2f} ms"
          f"   numpy {t_np * 1e3:8.2f} ms   speedup {t_np / t_jit:5.1f}x")


def bench_series(steps: int) -> None:
    results = {}
    for name, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, GAMMACHAIN_NO_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, "-c", SERIES_SNIPPET.format(steps=steps)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        elapsed, digest = proc.stdout.split()
        results[name] = (float(elapsed), digest)
    assert results["numba"][1] == results["numpy"][1], "series backends diverged"
    t_jit, t_np = results["numba"][0], results["numpy"][0]
    print(f"gamma series ({steps} steps):         numba {t_jit * 1e3:8.2f} ms"
          f"   numpy {t_np * 1e3:8.2f} ms   speedup {t_np / t_jit:5.1f}x")
    print(f"series sha256: {results['numba'][1][:16]}... (identical across backends)")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=500, help="series length for the end-to-end run")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best is reported)")
    args = parser.parse_args()

    if not NUMBA_ENABLED:
        print("numba backend unavailable (or disabled); nothing to compare")
        return 1
    # warm the jit caches so compile time stays out of the measurements
    state = init_network(seed=1)
    dijkstra_numba(np.array(state.weights), 0)

    bench_dijkstra(args.repeats)
    bench_perturb(args.repeats)
    bench_series(args.steps)
    return 0


if __name__ == "__main__":
    sys.exit(main())
