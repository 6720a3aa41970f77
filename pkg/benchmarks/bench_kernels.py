"""Timing of the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sizes 50 200 451] [--repeat 3]

numpy/LAPACK timings are listed for reference only.
"""
import argparse
import math
import os
import subprocess
import sys
import time

import numpy as np

from puritybounds.numerics import available_backends, det_complex, hermitian_eig


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def hermitian(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (z + z.conj().T)


def kernel_table(sizes, repeat):
    rng = np.random.default_rng(0)
    backends = available_backends()
    head = f"{'op':<6}{'n':>6}" + "".join(f"{b:>12}" for b in backends) + f"{'numpy':>12}"
    if "compiled" in backends:
        head += f"{'speedup':>10}"
    print(head)
    for n in sizes:
        m = hermitian(n, rng)
        # scaled so the determinant stays inside double range
        c = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(n)
        for op, fn, ref in (
            ("eig", lambda b: hermitian_eig(m, backend=b), lambda: np.linalg.eigh(m)),
            ("det", lambda b: det_complex(c, backend=b), lambda: np.linalg.det(c)),
        ):
            t = {b: best_of(lambda: fn(b), repeat) for b in backends}
            row = f"{op:<6}{n:>6}" + "".join(f"{t[b]:>11.4f}s" for b in backends)
            row += f"{best_of(ref, repeat):>11.4f}s"
            if "compiled" in t:
                row += f"{t['python'] / t['compiled']:>9.1f}x"
            print(row)


JC_SNIPPET = """
import math, time
from puritybounds import jaynes_cummings as jc
t0 = time.perf_counter()
model = jc.build_model(1.0, 1.0, 0.3, 5, 40)
psi0 = jc.coherent_product_state(model, math.sqrt(5.0), math.pi / 2, 0.0)
model.eig
t1 = time.perf_counter()
jc.run_time_series(model, psi0, 20.0, {steps})
t2 = time.perf_counter()
print(f"{{t1 - t0:.3f}} {{t2 - t1:.3f}}")
"""


def jc_table(steps):
    # backend is fixed at import, so each run gets a fresh interpreter
    print(f"\nJaynes-Cummings run, J=5, n_max=40 (dim 451), {steps} steps")
    print(f"{'backend':<10}{'setup':>10}{'series':>10}")
    for b in available_backends():
        env = dict(os.environ, PURITYBOUNDS_BACKEND=b)
        res = subprocess.run([sys.executable, "-c", JC_SNIPPET.format(steps=steps)],
                             env=env, capture_output=True, text=True, check=True)
        setup, series = (float(x) for x in res.stdout.split())
        print(f"{b:<10}{setup:>9.2f}s{series:>9.2f}s")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 451])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--steps", type=int, default=2000)
    args = p.parse_args()
    if "compiled" not in available_backends():
        print("compiled extension not built; timing the fallback only")
    kernel_table(args.sizes, max(1, args.repeat))
    jc_table(args.steps)


if __name__ == "__main__":
    main()
