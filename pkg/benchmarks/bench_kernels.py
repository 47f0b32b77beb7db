"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the DISCORDFREEZE_DISABLE_JIT flag
does not matter here. The first numba call (compilation, or loading the
on-disk cache) is timed separately and excluded from the per-call figures.
"""
import argparse
import math
import time

import numpy as np

from discordfreeze import _numpy_kernels as npk

try:
    from discordfreeze import _numba_kernels as nbk
except ImportError:
    nbk = None


def _best(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _density(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def cases(rng):
    rho = _density(rng)
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = h + h.conj().T
    thetas = np.linspace(0, math.pi / 2, 48)
    phis = 2 * math.pi * np.arange(48) / 48
    return {
        "jacobi 4x4 (x1000)": lambda m: [m.jacobi_eigvalsh(h, 1e-13, 100) for _ in range(1000)],
        "conditional entropy (x1000)": lambda m: [m.conditional_entropy(rho, 0.3, 1.1) for _ in range(1000)],
        "48x48 measurement grid": lambda m: m.conditional_entropy_grid(rho, thetas, phis),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    table = cases(rng)
    if nbk is None:
        print("numba not installed: timing numpy kernels only")
    else:
        t0 = time.perf_counter()
        for fn in table.values():
            fn(nbk)
        print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.3f} s")

    print(f"{'kernel':<30}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, fn in table.items():
        t_np = _best(lambda: fn(npk), args.repeat)
        if nbk is None:
            print(f"{name:<30}{t_np * 1e3:>12.3f}")
            continue
        t_nb = _best(lambda: fn(nbk), args.repeat)
        print(f"{name:<30}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
