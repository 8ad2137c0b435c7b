"""Compare the compiled and pure-Python Wright kernels.

Run with ``python benchmarks/bench_kernels.py``. Both backends are timed on
the same Wright grid and on a batch of flux solves, and their results are
checked for agreement.
"""
import argparse
import time

import numpy as np

from fracstefan import special_functions as sf
from fracstefan.similarity import FluxProblem, Material, solve_flux


def wright_grid():
    cases = []
    for nu in (0.05, 0.25, 0.45):
        for beta in (1.0, 1.0 - nu, 0.3):
            for z in np.concatenate([-np.geomspace(0.01, 60.0, 25), np.geomspace(0.01, 10.0, 10)]):
                cases.append((float(z), -nu, beta))
    return cases


def problems():
    ice, water = Material(2.22, 2050.0), Material(0.556, 4186.0)
    return [FluxProblem(ice, water, 1000.0, 334000.0, 263.15, 273.15, q0, a)
            for a in (0.2, 0.4, 0.6, 0.8, 0.95) for q0 in (2e4, 5e4, 2e5)]


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    grid, probs = wright_grid(), problems()
    backends = ["python"] + (["compiled"] if sf._backend.compiled_kernels is not None else [])
    results = {}
    for name in backends:
        with sf.use_backend(name):
            tw, vals = timed(lambda: [sf.wright(*c) for c in grid], args.repeat)
            ts, mus = timed(lambda: [solve_flux(p).mu for p in probs], args.repeat)
        results[name] = (vals, mus)
        print(f"{name:>9}: wright x{len(grid)} {tw * 1e3:8.1f} ms   solve_flux x{len(probs)} {ts * 1e3:8.1f} ms")
    if len(results) == 2:
        (v1, m1), (v2, m2) = results["python"], results["compiled"]
        dv = max(abs(a - b) / max(abs(a), 1e-300) for a, b in zip(v1, v2) if a != b) if v1 != v2 else 0.0
        dm = max(abs(a - b) / a for a, b in zip(m1, m2))
        print(f"max relative difference: wright {dv:.2e}, mu {dm:.2e}")
    else:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
