"""Time the compiled kernels against their pure fallbacks.

RK4: the Cython stepper against the numpy stepper on the same batch.
Exact arithmetic: the Killing solve under gmpy2 against fractions, each
in a fresh interpreter since the backend is fixed at import.

    python3 benchmarks/bench_kernels.py [--steps N] [--algebra NAME]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from nilkilling import catalog, flow

EXACT_SNIPPET = """
import json, time
from nilkilling import catalog
from nilkilling._scalar import BACKEND
from nilkilling.killing import killing_space
alg, _ = catalog.load({name!r}).build()
best = float("inf")
for _ in range({repeat}):
    alg, _ = catalog.load({name!r}).build()
    t0 = time.perf_counter()
    dim = killing_space(alg).dim
    best = min(best, time.perf_counter() - t0)
print(json.dumps({{"backend": BACKEND, "seconds": best, "dim": dim}}))
"""


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rk4(name, steps, states, repeat):
    alg, _ = catalog.load(name).build()
    alg = alg.to_float()
    w0, y0 = flow.random_states(alg.dim, states, seed=0)
    rows = {}
    kernels = ["numpy"] + (["cython"] if flow.KERNEL == "cython" else [])
    trajs = {}
    for k in kernels:
        rows[k] = best_of(lambda: trajs.__setitem__(k, flow.integrate(alg, y0, w0, steps=steps, kernel=k)), repeat)
    if "cython" in trajs:
        diff = float(np.max(np.abs(trajs["cython"].y - trajs["numpy"].y)))
        print(f"rk4 kernels agree to {diff:.1e}")
    return rows


def bench_exact(name, repeat):
    rows = {}
    for pure in ("", "1"):
        env = dict(os.environ, NILKILLING_PURE=pure)
        if not pure:
            env.pop("NILKILLING_PURE")
        code = EXACT_SNIPPET.format(name=name, repeat=repeat)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        res = json.loads(out.stdout)
        rows[res["backend"]] = res["seconds"]
    return rows


def show(title, rows):
    base = rows.get("numpy", rows.get("fractions"))
    print(title)
    for k, sec in rows.items():
        print(f"  {k:<10} {sec * 1e3:10.2f} ms   x{base / sec:6.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="dim8-double")
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--states", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    show(f"RK4 on {args.algebra}, {args.steps} steps x {args.states} states", bench_rk4(args.algebra, args.steps, args.states, args.repeat))
    show(f"Killing solve on {args.algebra}", bench_exact(args.algebra, args.repeat))


if __name__ == "__main__":
    main()
