"""Compare the compiled and pure-NumPy kernel backends.

Two levels:
1. micro: time the three kernels (epsilon_norm, grouped_epsilon_norms,
   sgl_prox) on synthetic inputs of a few sizes, with both backends
   loaded side by side in this process;
2. end-to-end: fit a full DFR-SGL path in a subprocess per backend
   (backend choice is an import-time decision, hence the subprocess).

Run as: python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from sglscreen.kernels import available_backends
from sglscreen.model import GroupPartition

END_TO_END = r"""
import time
import numpy as np
from sglscreen import (GenSpec, generate, standardize, PenaltySpec,
                       PathConfig, FitConfig, fit_path)
from sglscreen.kernels import BACKEND

design, _ = generate(GenSpec(n=%(n)d, p=%(p)d, seed=0))
design = standardize(design, True)
t0 = time.perf_counter()
sol = fit_path(design, PenaltySpec(0.95), "linear", "dfr_sgl",
               PathConfig(%(path)d, 0.1), FitConfig())
print(f"{BACKEND}: {time.perf_counter() - t0:.3f}s "
      f"(converged={bool(sol.converged.all())})")
"""


def bench_micro(repeats):
    backends = available_backends()
    rng = np.random.default_rng(0)
    print(f"backends available: {', '.join(backends)}")
    print()
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name in backends))

    for d in (50, 500, 5000):
        x = rng.standard_normal(d)
        times = [
            min(timeit.repeat(lambda: mod.epsilon_norm(x, 0.05),
                              number=200, repeat=repeats)) / 200
            for mod in backends.values()
        ]
        _row(f"epsilon_norm d={d}", times)

    for p, size in ((1000, 20), (10000, 25)):
        groups = GroupPartition.from_sizes([size] * (p // size))
        grad = rng.standard_normal(p)
        eps = np.full(groups.m, 0.05)
        times = [
            min(timeit.repeat(
                lambda: mod.grouped_epsilon_norms(
                    grad, groups.indices, groups.indptr, eps),
                number=50, repeat=repeats)) / 50
            for mod in backends.values()
        ]
        _row(f"grouped_epsilon_norms p={p}", times)

    for p, size in ((1000, 20), (10000, 25)):
        groups = GroupPartition.from_sizes([size] * (p // size))
        beta = rng.standard_normal(p)
        l1 = np.full(p, 0.01)
        l2 = np.full(groups.m, 0.02)
        times = [
            min(timeit.repeat(
                lambda: mod.sgl_prox(beta, l1, l2, groups.indices,
                                     groups.indptr),
                number=50, repeat=repeats)) / 50
            for mod in backends.values()
        ]
        _row(f"sgl_prox p={p}", times)


def _row(label, times):
    cells = "".join(f"{t * 1e6:10.1f}us" for t in times)
    if len(times) == 2 and times[1] > 0:
        cells += f"   (x{times[0] / times[1]:.1f})"
    print(f"{label:34s}{cells}")


def bench_end_to_end(n, p, path_length):
    print()
    print(f"end-to-end DFR-SGL path (n={n}, p={p}, {path_length} points):")
    code = END_TO_END % {"n": n, "p": p, "path": path_length}
    for env_val in ("1", ""):
        env = dict(os.environ)
        if env_val:
            env["SGLSCREEN_PURE_PYTHON"] = env_val
        else:
            env.pop("SGLSCREEN_PURE_PYTHON", None)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true",
                    help="fewer repeats, smaller end-to-end problem")
    args = ap.parse_args()
    repeats = 3 if args.quick else 7
    bench_micro(repeats)
    if args.quick:
        bench_end_to_end(100, 300, 20)
    else:
        bench_end_to_end(200, 1000, 50)


if __name__ == "__main__":
    main()
