"""Compare the compiled kernel backend against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import importlib
import time

import numpy as np


def load_backends():
    from cytomon.kernels import _fast  # noqa: F401  (fails if not built)
    import cytomon.kernels.pure as pure

    return {"cython": importlib.import_module("cytomon.kernels._fast"), "pure": pure}


def bench(fn, *args, repeat=5, number=20):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def main():
    try:
        backends = load_backends()
    except ImportError:
        print("compiled backend not built; nothing to compare")
        return

    rng = np.random.default_rng(0)
    n_draws, n_times = 2000, 12
    times = np.sort(rng.uniform(1.0, 20.0, n_times))
    alphas = rng.choice([1.0, 1.5, 2.0], n_draws)
    gammas = rng.choice([0.1, 0.2, 0.4], n_draws)
    taus = rng.choice([6.0, 8.0, 10.0], n_draws)
    obs = rng.normal(6.0, 1.0, n_times)

    cases = [
        (
            "profile_mean_many",
            lambda k: k.profile_mean_many(times, 8.0, 0.5, 4.0, 8.0, 0.2, 8.0),
        ),
        (
            "cycle_loglik_kernel",
            lambda k: k.cycle_loglik_kernel(times, obs, 8.0, 0.5, 4.0, 8.0, 0.2, 8.0, 0.04),
        ),
        (
            "profile_cloud",
            lambda k: k.profile_cloud(times, 8.0, 10.0, alphas, gammas, taus, 0.05, 8.0),
        ),
    ]

    print(f"{'kernel':<22}{'pure (us)':>12}{'cython (us)':>14}{'speedup':>10}")
    for name, call in cases:
        t_pure = bench(call, backends["pure"]) * 1e6
        t_fast = bench(call, backends["cython"]) * 1e6
        print(f"{name:<22}{t_pure:>12.1f}{t_fast:>14.1f}{t_pure / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
