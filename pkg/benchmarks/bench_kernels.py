"""Timings for the log-space q-product kernels, numba vs numpy.

    python3 benchmarks/bench_kernels.py [--sizes 1 100 10000] [--repeat 5] [--end-to-end]

Kernel rows call both implementations in one process.  ``--end-to-end`` also
times a full ``ellbeta verify elliptic-beta`` under each backend, switching
with ELLBETA_DISABLE_NUMBA in a child process.
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from ellbeta import _kernels as K

TOL = 1e-16
MAX_TERMS = 10_000


def _args(n, rng):
    z = np.exp(2j * np.pi * rng.uniform(size=n)) * rng.uniform(0.5, 1.5, size=n)
    return z


def _best(fn, repeat):
    fn()  # warm-up, includes JIT compilation on first call
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    cases = [
        ("log_qpoch   q=0.3", lambda impl, z: impl(z, 0.3 + 0.1j, TOL, MAX_TERMS), "qpoch"),
        ("log_qpoch   q=0.9", lambda impl, z: impl(z, 0.9j, TOL, MAX_TERMS), "qpoch"),
        ("log_egamma  q,p=0.3,0.2", lambda impl, z: impl(z, 0.3 + 0.1j, 0.2, TOL, MAX_TERMS), "egamma"),
        ("log_egamma  q,p=0.7,0.6", lambda impl, z: impl(z, 0.7j, 0.6, TOL, MAX_TERMS), "egamma"),
    ]
    impls = {
        "qpoch": (K.log_qpoch_numpy, K.log_qpoch_numba),
        "egamma": (K.log_egamma_numpy, K.log_egamma_numba),
    }
    print(f"active backend: {K.BACKEND}")
    print(f"{'kernel':26s} {'n':>7s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, call, kind in cases:
        np_impl, nb_impl = impls[kind]
        for n in sizes:
            z = _args(n, rng)
            t_np = _best(lambda: call(np_impl, z), repeat)
            if nb_impl is None:
                print(f"{label:26s} {n:7d} {1e3 * t_np:10.3f} {'n/a':>10s}")
                continue
            t_nb = _best(lambda: call(nb_impl, z), repeat)
            print(f"{label:26s} {n:7d} {1e3 * t_np:10.3f} {1e3 * t_nb:10.3f} {t_np / t_nb:7.1f}x")


def bench_end_to_end():
    print("\nverify elliptic-beta (child process, includes import and JIT cache load)")
    for name, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, ELLBETA_DISABLE_NUMBA=flag)
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "ellbeta.cli", "verify", "elliptic-beta"],
                              env=env, capture_output=True, text=True)
        wall = time.perf_counter() - t0
        status = "ok" if proc.returncode == 0 else f"exit {proc.returncode}"
        print(f"  {name:6s} {wall:6.2f}s  {status}")


def main(argv=None):
    ap = argparse.ArgumentParser(description="numba vs numpy kernel timings")
    ap.add_argument("--sizes", type=int, nargs="+", default=[1, 100, 10_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    bench_kernels(args.sizes, args.repeat)
    if args.end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
