"""Time the compiled and pure-Python Langevin kernels on the same workloads.

Usage::

    python3 benchmarks/bench_kernels.py --steps 200000 --batch 1000 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pulseforge._backend import available_backends

KAPPA = 2 * np.pi * 1e4
RATE = 2 * np.pi * 0.3e6


def _drive(n_steps: int, dt: float) -> np.ndarray:
    # samples at every half step, as the RK4 kernels expect
    t = np.arange(2 * n_steps + 1) * 0.5 * dt
    return 1e6 * np.sin(np.pi * t / t[-1]) ** 2 * np.exp(0.3j)


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=200_000, help="RK4 steps per trajectory")
    parser.add_argument("--batch", type=int, default=1_000, help="trajectories in the batch workload")
    parser.add_argument("--batch-steps", type=int, default=2_000, help="RK4 steps per batch member")
    parser.add_argument("--kerr", type=float, default=1e3, help="Kerr coefficient (1/s)")
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args(argv)

    dt = 1e-4 / args.steps
    drive = _drive(args.steps, dt)
    batch_dt = 1e-5 / args.batch_steps
    batch_drive = _drive(args.batch_steps, batch_dt)
    rates = RATE * (1 + np.linspace(-0.2, 0.2, args.batch))
    alpha0 = np.zeros(args.batch, dtype=complex)

    timings = {}
    for name, mod in available_backends().items():
        single = _best_of(lambda: mod.langevin_trajectory(0j, RATE, KAPPA, args.kerr, dt, drive, 100),
                          args.repeat)
        batch = _best_of(lambda: mod.langevin_final_batch(alpha0, rates, KAPPA, args.kerr, batch_dt,
                                                          batch_drive), args.repeat)
        timings[name] = (single, batch)

    print(f"{'backend':<8} {'trajectory [s]':>15} {'batch [s]':>12}")
    for name, (single, batch) in timings.items():
        print(f"{name:<8} {single:>15.4f} {batch:>12.4f}")
    if {"python", "cython"} <= timings.keys():
        py, cy = timings["python"], timings["cython"]
        print(f"speed-up: trajectory x{py[0] / cy[0]:.1f}, batch x{py[1] / cy[1]:.1f}")
    else:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
