"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run twice, once per backend:

    python benchmarks/bench_kernels.py
    TORUSLAB_NO_NUMBA=1 python benchmarks/bench_kernels.py

or let the script fork itself with ``--both`` to print a side-by-side
table.  Results must agree exactly between backends; the script asserts
that before reporting timings.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def _cases():
    from toruslab.diophantine import DioQuery
    from toruslab.lattice import Annulus, Ball, enumerate_region

    yield ("quadruple_count ball d=2 N=24",
           "count", enumerate_region(Ball(radius=24), 2).points)
    yield ("quadruple_count ball d=3 N=10",
           "count", enumerate_region(Ball(radius=10), 3).points)
    yield ("dio_bruteforce shell N=4 delta=2",
           "dio", DioQuery("shell", 4, 2).lattice_points())
    yield ("picard annulus d=3 N=8",
           "picard", enumerate_region(Annulus(8), 3))


def _run_case(kind, payload):
    from toruslab._kernels import dio_bruteforce_count, \
        resonance_quadruple_count
    if kind == "count":
        return resonance_quadruple_count(payload)
    if kind == "dio":
        return dio_bruteforce_count(payload, max_triples=10**9)
    from toruslab.picard import PicardInput, picard_coefficients
    ones = payload.with_coeffs(np.ones(len(payload), dtype=np.complex128))
    out = picard_coefficients(PicardInput(ones, ones, 0.0, 1e-3))
    return round(float(np.abs(out.coeffs).sum()), 9)


def run_backend():
    from toruslab.accel import backend_name
    print(f"# backend: {backend_name()}")
    for name, kind, payload in _cases():
        _run_case(kind, payload)              # warm-up (jit compilation)
        t0 = time.perf_counter()
        result = _run_case(kind, payload)
        dt = time.perf_counter() - t0
        print(f"{name}\t{result}\t{dt:.4f}")


def run_both():
    rows = {}
    for flag in ("0", "1"):
        env = dict(os.environ, TORUSLAB_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__], env=env,
                             capture_output=True, text=True, check=True)
        for line in out.stdout.splitlines():
            if line.startswith("#"):
                continue
            name, result, dt = line.split("\t")
            rows.setdefault(name, {})[flag] = (result, float(dt))
    print(f"{'case':45s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, by in rows.items():
        (res_nb, t_nb), (res_np, t_np) = by["0"], by["1"]
        assert res_nb == res_np, f"backend mismatch in {name}"
        print(f"{name:45s} {t_nb:9.4f}s {t_np:9.4f}s {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--both", action="store_true",
                        help="run both backends and compare")
    args = parser.parse_args()
    if args.both:
        run_both()
    else:
        run_backend()
