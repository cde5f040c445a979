"""Hot numerical kernels with a compiled path and a pure-numpy fallback.

Two kernels dominate simulation time: dense-graph shortest paths and the
elementwise latency update. Each exists twice, once as a numba-compiled loop
and once vectorized in numpy. Both variants apply the same floating-point
operations in the same order per element, so their outputs are bit-identical;
the equality is asserted by the test suite and the benchmark.

Backend selection: setting the environment variable GAMMACHAIN_NO_NUMBA=1
forces the numpy path. Otherwise the compiled path is used whenever numba
imports cleanly, with numpy as the silent fallback.

All random draws happen outside these kernels; callers pass the drawn arrays
in, which keeps the consumed RNG stream independent of the backend.
"""

from __future__ import annotations

import os

import numpy as np

INACTIVE = 1e7
WEIGHT_FLOOR = 1.0
# finite weights must stay strictly below the sentinel
WEIGHT_CEIL = INACTIVE - 1.0


def _numpy_forced() -> bool:
    return os.environ.get("GAMMACHAIN_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}


def dijkstra_numpy(weights: np.ndarray, source: int) -> np.ndarray:
    """Single-source shortest latencies on a dense weight matrix.

    Distances start at the sentinel and only strict improvements below it are
    recorded, so unreachable nodes and nodes whose best path costs at least
    1e7 both report exactly 1e7. Sentinel-valued edges never relax.
    """
    n = weights.shape[0]
    dist = np.full(n, INACTIVE)
    dist[source] = 0.0
    visited = np.zeros(n, dtype=bool)
    for _ in range(n):
        masked = np.where(visited, np.inf, dist)
        u = int(np.argmin(masked))
        if masked[u] >= INACTIVE:
            # every remaining node is unreachable below the sentinel
            break
        visited[u] = True
        row = weights[u]
        candidate = dist[u] + row
        better = (row < INACTIVE) & ~visited & (candidate < dist)
        dist[better] = candidate[better]
    return dist


def perturb_numpy(
    prev: np.ndarray,
    mean: np.ndarray,
    omega_sum: np.ndarray,
    u0: np.ndarray,
    u1: np.ndarray,
    delta_t: float,
    active: np.ndarray,
) -> np.ndarray:
    """Elementwise latency update for one evolution step over flattened pairs.

    A finite link that stays active scales by (1 + delta_t * S); a finite
    link sampled inactive becomes the sentinel; an inactive link restarts
    from its regional mean scaled the same way, regardless of the sampled
    adjacency. S is a skew-normal draw built from the two standard normals
    with shape 3 * omega_sum. Finite results are clamped into
    [WEIGHT_FLOOR, WEIGHT_CEIL].
    """
    alpha = 3.0 * omega_sum
    delta = alpha / np.sqrt(1.0 + alpha * alpha)
    shock = delta * np.abs(u0) + np.sqrt(1.0 - delta * delta) * u1
    factor = 1.0 + delta_t * shock
    prev_finite = prev < INACTIVE
    base = np.where(prev_finite, prev, mean)
    value = np.minimum(np.maximum(base * factor, WEIGHT_FLOOR), WEIGHT_CEIL)
    stays_active = ~prev_finite | active
    return np.where(stays_active, value, INACTIVE)


_HAVE_NUMBA = False
if not _numpy_forced():
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _dijkstra_jit(weights, source):
        n = weights.shape[0]
        dist = np.full(n, INACTIVE)
        dist[source] = 0.0
        visited = np.zeros(n, dtype=np.bool_)
        for _ in range(n):
            best = np.inf
            u = -1
            for v in range(n):
                if not visited[v] and dist[v] < best:
                    best = dist[v]
                    u = v
            if u < 0 or best >= INACTIVE:
                break
            visited[u] = True
            du = dist[u]
            for v in range(n):
                w = weights[u, v]
                if w < INACTIVE and not visited[v]:
                    candidate = du + w
                    if candidate < dist[v]:
                        dist[v] = candidate
        return dist

    @njit(cache=True)
    def _perturb_jit(prev, mean, omega_sum, u0, u1, delta_t, active):
        n = prev.shape[0]
        out = np.empty(n)
        for k in range(n):
            alpha = 3.0 * omega_sum[k]
            delta = alpha / np.sqrt(1.0 + alpha * alpha)
            shock = delta * np.abs(u0[k]) + np.sqrt(1.0 - delta * delta) * u1[k]
            factor = 1.0 + delta_t * shock
            if prev[k] < INACTIVE:
                if not active[k]:
                    out[k] = INACTIVE
                    continue
                value = prev[k] * factor
            else:
                value = mean[k] * factor
            if value < WEIGHT_FLOOR:
                value = WEIGHT_FLOOR
            elif value > WEIGHT_CEIL:
                value = WEIGHT_CEIL
            out[k] = value
        return out

    dijkstra_numba = _dijkstra_jit
    perturb_numba = _perturb_jit
    dijkstra_dense = _dijkstra_jit
    perturb_weights = _perturb_jit
else:
    dijkstra_numba = None
    perturb_numba = None
    dijkstra_dense = dijkstra_numpy
    perturb_weights = perturb_numpy

NUMBA_ENABLED = _HAVE_NUMBA


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
