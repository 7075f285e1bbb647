"""Benchmark the orbit-integration kernel across backends.

Runs the same RK4 orbit on every importable backend, reports steps per
second and the speedup of the compiled extension over the pure-Python
reference, and verifies that the outputs agree bitwise.

Usage: python -m benchmarks.bench_backends [--steps N] [--repeats K]
"""

import argparse
import time

import numpy as np

from reebtk import backend

CASES = [
    ("alpha0, T=100, dt=1e-3", backend.KIND_ALPHA, (0.0,), 0.5, 1e-3, 100_000),
    ("alpha3, T=100, dt=1e-3", backend.KIND_ALPHA, (3.0,), 0.25, 1e-3, 100_000),
    ("klein,  T=100, dt=1e-3", backend.KIND_KLEIN, (), 0.2, 1e-3, 100_000),
    ("segment, T=200, dt=1e-3", backend.KIND_SEGMENT, (0.0, 1.0, 2.0, 0.0), 0.5, 1e-3, 200_000),
]


def time_orbit(mod, kind, params, t0, dt, n_steps, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = mod.rk4_orbit(kind, params, t0, 0.1, 0.2, dt, n_steps)
        best = min(best, time.perf_counter() - start)
    orbit, status, n_done = result
    if status != 0 or n_done != n_steps:
        raise RuntimeError(f"benchmark orbit did not complete: status={status}")
    return best, np.asarray(orbit)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=None,
                    help="override the step count of every case")
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repeats; the best run is reported")
    args = ap.parse_args()

    mods = backend.available_backends()
    names = sorted(mods)
    print(f"backends available: {', '.join(names)} (active: {backend.BACKEND})")
    print()

    header = f"{'case':<26}" + "".join(f"{n + ' steps/s':>20}" for n in names)
    if "compiled" in mods and "python" in mods:
        header += f"{'speedup':>10}{'bitwise':>9}"
    print(header)
    print("-" * len(header))

    for label, kind, params, t0, dt, n_steps in CASES:
        n = args.steps or n_steps
        timings = {}
        orbits = {}
        for name in names:
            secs, orbit = time_orbit(mods[name], kind, params, t0, dt, n, args.repeats)
            timings[name] = secs
            orbits[name] = orbit
        row = f"{label:<26}" + "".join(f"{n / timings[m]:>20,.0f}" for m in names)
        if "compiled" in mods and "python" in mods:
            speedup = timings["python"] / timings["compiled"]
            same = np.array_equal(orbits["python"], orbits["compiled"])
            row += f"{speedup:>9.1f}x{'yes' if same else 'NO':>9}"
            if not same:
                raise SystemExit("backend outputs diverged; benchmark aborted")
        print(row)


if __name__ == "__main__":
    main()
