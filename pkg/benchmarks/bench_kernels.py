#!/usr/bin/env python3
"""Benchmark the compiled current kernel against the pure-numpy fallback.

Two views:
  raw        per-point throughput of exit_current_components on realistic
             time grids (the quadrature's panel batches are concatenations
             of exactly such arrays)
  end-to-end wall time to build the angular distribution and one full
             table row with each backend forced in turn

Both backends are also checked against each other pointwise; a silent
numerical divergence would make the speedup meaningless.

Usage: python benchmarks/bench_kernels.py [--points N] [--repeat K]
"""

import argparse
import math
import time
from dataclasses import replace

import numpy as np

from qclock import ArrivalScheme, PhysicsConfig, measure, pi_of_phi
from qclock import kernels
from qclock._kernels_py import exit_current_components as py_kernel

try:
    from qclock._kernels import exit_current_components as c_kernel
except ImportError:
    c_kernel = None


def time_call(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_raw(points, repeat):
    cfg = PhysicsConfig(sigma0=1e-8)
    t0 = cfg.transit_time
    t = np.linspace(0.0, math.pi / cfg.omega, points)
    args = (t, cfg.d, cfg.u, cfg.sigma0, cfg.hbar, cfg.m0, cfg.omega)

    results = {}
    results["python"] = time_call(lambda: py_kernel(*args), repeat)
    if c_kernel is not None:
        results["compiled"] = time_call(lambda: c_kernel(*args), repeat)
        jx_c, jz_c = c_kernel(*args)
        jx_p, jz_p = py_kernel(*args)
        scale = max(np.abs(jx_p).max(), np.abs(jz_p).max())
        worst = max(np.abs(jx_c - jx_p).max(), np.abs(jz_c - jz_p).max()) / scale
        print(f"backend agreement on {points} points near t0={t0:.2e}: "
              f"max rel deviation {worst:.2e}")
        assert worst < 1e-14, "backends disagree beyond roundoff"
    print(f"raw kernel, {points} points:")
    for name, secs in results.items():
        print(f"  {name:9s} {secs * 1e9 / points:8.1f} ns/point "
              f"({secs * 1e3:.2f} ms/call)")
    if "compiled" in results:
        print(f"  speedup   {results['python'] / results['compiled']:.1f}x")


def bench_end_to_end(repeat):
    cfg = replace(PhysicsConfig(), sigma0=1e-8)
    thetas = [cfg.phi_peak, cfg.phi_peak + math.radians(60.0),
              cfg.phi_peak + math.radians(90.0)]

    def row():
        dist = pi_of_phi(cfg, ArrivalScheme.MODULUS_TOTAL_CURRENT)
        return [measure(dist, th) for th in thetas]

    names = ["python"] + (["compiled"] if c_kernel is not None else [])
    print("end-to-end (distribution + 3-angle table row, sigma0=1e-8):")
    timings = {}
    for name in names:
        kernels._use_for_testing(name)
        try:
            timings[name] = time_call(row, repeat)
        finally:
            kernels._use_for_testing(names[-1])
        print(f"  {name:9s} {timings[name] * 1e3:8.2f} ms")
    if "compiled" in timings:
        print(f"  speedup   {timings['python'] / timings['compiled']:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()
    if c_kernel is None:
        print("compiled kernel not available; timing the fallback only")
    bench_raw(args.points, args.repeat)
    bench_end_to_end(args.repeat)


if __name__ == "__main__":
    main()
