"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--m 100] [--phases 100000] [--repeat 3]

Times the batched corner kernel, the single-matrix corner kernel and a full
phase sweep (kernel plus amplitude formulas) under both backends.  The
sweep row is the one the 10^5-solves-at-M=100 budget refers to.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ptscatter.kernels import available_backends


def best(fn, repeat, number=1):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_rows(m, phases, repeat):
    rng = np.random.default_rng(0)
    Z = rng.uniform(-1, 1, m)
    Y = rng.uniform(-1, 1, m - 1)
    right = Z.astype(complex)
    right[1:] += 1j * Y
    base = np.concatenate([np.conj(right[:0:-1]), right])
    shifts = 2.0 * np.cos(np.linspace(0.05, np.pi - 0.05, phases))
    single = base + shifts[phases // 2]

    rows = []
    for name, mod in available_backends().items():
        t_batch = best(lambda: mod.corners_batch(base, shifts), repeat)
        t_one = best(lambda: mod.corners(single), repeat, number=200)
        rows.append((name, t_batch, t_one))
    return rows


def sweep_time(backend, m, phases, repeat):
    # the backend is fixed at import, so each one runs in a fresh interpreter
    code = (
        "import numpy as np, timeit;"
        "from ptscatter import make_potential;"
        "from ptscatter.matrix_solver import sweep;"
        f"rng = np.random.default_rng(0);"
        f"p = make_potential(1.0, rng.uniform(-1, 1, {m}), rng.uniform(-1, 1, {m - 1}));"
        f"phis = np.linspace(0.05, np.pi - 0.05, {phases});"
        f"print(min(timeit.repeat(lambda: sweep(p, phis), repeat={repeat}, number=1)))"
    )
    env = dict(os.environ)
    env.pop("PTSCATTER_PURE_PYTHON", None)
    if backend == "python":
        env["PTSCATTER_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=100, help="cutoff M (matrix size 2M-1)")
    ap.add_argument("--phases", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"M={args.m} (n={2 * args.m - 1}), {args.phases} phases, best of {args.repeat}")
    print(f"{'backend':<10}{'batch [s]':>12}{'per phase [us]':>16}{'single [us]':>14}"
          f"{'sweep [s]':>12}")
    times = {}
    for name, t_batch, t_one in kernel_rows(args.m, args.phases, args.repeat):
        t_sweep = sweep_time(name, args.m, args.phases, args.repeat)
        times[name] = (t_batch, t_one, t_sweep)
        print(f"{name:<10}{t_batch:>12.3f}{1e6 * t_batch / args.phases:>16.3f}"
              f"{1e6 * t_one:>14.2f}{t_sweep:>12.3f}")
    if "cython" in times:
        ratio = [p / c for p, c in zip(times["python"], times["cython"])]
        print(f"cython speed-up: batch x{ratio[0]:.1f}, single x{ratio[1]:.1f}, "
              f"sweep x{ratio[2]:.1f}")
    else:
        print("compiled kernels not built; only the pure-Python backend was timed")


if __name__ == "__main__":
    main()
