"""Benchmark the LP kernel with and without the numba jit.

The kernel module picks its implementation at import time from the
ZONOSHARP_DISABLE_NUMBA environment variable, so each configuration runs in
a fresh subprocess and reports median wall time per solved LP over a fixed
workload of support-function LPs on randomly generated constrained
zonotopes.

Usage: python3 benchmarks/bench_lp.py [--sizes small,medium,large] [--reps N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, os, sys, time
import numpy as np
import zonosharp._simplex as S

spec = json.loads(sys.argv[1])
rng = np.random.default_rng(12345)
problems = []
for (m, n, count) in spec["shapes"]:
    for _ in range(count):
        A = rng.normal(size=(m, n))
        xi = rng.uniform(0.0, 1.0, size=n)
        b = A @ xi
        g = rng.normal(size=n)
        problems.append((g, A, b))

# warm-up: trigger jit compilation outside the timed region
g, A, b = problems[0]
S.solve_bounded(g, A, b, np.zeros(A.shape[1]), np.ones(A.shape[1]))

times = []
solved = 0
for _ in range(spec["reps"]):
    t0 = time.perf_counter()
    for g, A, b in problems:
        n = A.shape[1]
        st, obj, x = S.solve_bounded(g, A, b, np.zeros(n), np.ones(n))
        solved += st == 0
    times.append(time.perf_counter() - t0)

print(json.dumps({
    "using_numba": S.USING_NUMBA,
    "n_problems": len(problems),
    "solved_per_rep": solved / spec["reps"],
    "seconds_per_rep": sorted(times)[len(times) // 2],
}))
"""

SIZES = {
    "small": [(5, 12, 40), (10, 25, 40)],
    "medium": [(30, 60, 15), (60, 120, 10)],
    "large": [(120, 240, 4)],
}


def run(disable_numba: bool, shapes, reps: int) -> dict:
    env = dict(os.environ)
    env["ZONOSHARP_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    spec = json.dumps({"shapes": shapes, "reps": reps})
    out = subprocess.run([sys.executable, "-c", WORKER, spec],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="small,medium,large",
                    help="comma-separated subset of: " + ",".join(SIZES))
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()

    for size in args.sizes.split(","):
        shapes = SIZES[size]
        res_np = run(True, shapes, args.reps)
        res_nb = run(False, shapes, args.reps)
        assert res_np["using_numba"] is False
        speed = res_np["seconds_per_rep"] / res_nb["seconds_per_rep"]
        print(f"{size:>7}: {res_np['n_problems']} LPs/rep | "
              f"numpy {res_np['seconds_per_rep']:.3f}s | "
              f"numba {res_nb['seconds_per_rep']:.3f}s | "
              f"speedup x{speed:.2f}"
              + ("" if res_nb["using_numba"] else "  (numba unavailable!)"))


if __name__ == "__main__":
    main()
