#!/usr/bin/env python3
"""Benchmark the compiled integrand kernels against the NumPy fallback.

Times the raw kernels on representative workloads and the full
success-probability pipeline under each backend (the pipeline runs in a
subprocess so the import-time backend selection can differ).

Usage: python benchmarks/bench_kernels.py
"""
import math
import os
import subprocess
import sys
import time

import numpy as np

from corrmrc._kernels import _fallback

try:
    from corrmrc._kernels import _compiled
except ImportError:
    _compiled = None

SCENARIOS = [
    # (label, alpha, d, m_d, m_i, inv_snr, lam)
    ("rayleigh a=4", 4.0, 10.0, 1, 1.0, 1.0, 1e-3),
    ("nakagami m=4 a=3.5", 3.5, 10.0, 4, 1.5, 0.0, 1e-3),
    ("calm interferers m_i=64", 4.0, 10.0, 2, 64.0, 1.0, 1e-3),
]
T = 1.0


def best_of(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels():
    print(f"{'scenario':<28} {'n':>6} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for label, alpha, d, m_d, m_i, inv_snr, lam in SCENARIOS:
        for n in (15, 240, 4096):
            z = np.linspace(1e-6, 0.999999, n) * T
            args = (0.93, T, alpha, d, m_d, m_i, inv_snr, lam, False)
            t_py = best_of(lambda: _fallback.integrand_lower(z, *args))
            if _compiled is None:
                print(f"{label:<28} {n:>6} {t_py * 1e6:>8.1f}us {'-':>10} {'-':>8}")
                continue
            t_c = best_of(lambda: _compiled.integrand_lower(z, *args))
            print(
                f"{label:<28} {n:>6} {t_py * 1e6:>8.1f}us {t_c * 1e6:>8.1f}us "
                f"{t_py / t_c:>7.1f}x"
            )


def bench_pipeline():
    code = (
        "import math, time, corrmrc;"
        "cfg = corrmrc.SystemConfig(lam=1e-3, alpha=3.5, d=10.0, m_d=4, m_i=1.5, snr=math.inf);"
        "corrmrc.p_mrc_exact(cfg, 1.0);"  # warm-up
        "t0 = time.perf_counter();"
        "n = 20;"
        "[corrmrc.p_mrc_exact(cfg, 1.0) for _ in range(n)];"
        "dt = (time.perf_counter() - t0) / n;"
        "print(corrmrc.KERNEL_BACKEND, dt)"
    )
    results = {}
    for force_pure in (False, True):
        env = dict(os.environ)
        env.pop("CORRMRC_PURE_PYTHON", None)
        if force_pure:
            env["CORRMRC_PURE_PYTHON"] = "1"
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env
        )
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            continue
        backend, dt = out.stdout.split()
        results[backend] = float(dt)
    print("\nfull evaluation (m_d=4, no noise), per call:")
    for backend, dt in results.items():
        print(f"  {backend:<9} {dt * 1e3:8.2f} ms")
    if len(results) == 2:
        print(f"  speedup   {results['python'] / results['compiled']:8.1f}x")


if __name__ == "__main__":
    print(f"kernel benchmark; compiled extension {'present' if _compiled else 'MISSING'}\n")
    bench_kernels()
    bench_pipeline()
