"""Time the hot kernels with and without numba.

Each backend runs in its own interpreter because the backend is fixed at
import time by ``QCALC_DISABLE_NUMBA``.  The numba run is warmed up first so
compilation is excluded.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, timeit
import numpy as np
from qcalc import _jit, kernels

repeat = int(sys.argv[1])
terms = np.random.default_rng(0).standard_normal(200_000)
cases = {
    "bracket_table(2000, 0.9)": lambda: kernels.bracket_table(2000, 0.9),
    "factorial_table(300, 0.95)": lambda: kernels.factorial_table(300, 0.95),
    "compensated_sum(200k)": lambda: kernels.compensated_sum(terms, terms.size, True),
    "q_series exp x=3 q=0.999": lambda: kernels.q_series(3.0, 0.999, 0, 1e-16, 10000, 1e6),
    "q_series sin x=1 q=0.5 x1000": lambda: [kernels.q_series(1.0, 0.5, 1, 1e-16, 10000, 1e6) for _ in range(1000)],
}
for fn in cases.values():
    fn()
out = {"backend": _jit.BACKEND}
for name, fn in cases.items():
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def measure(disable, repeat):
    env = dict(os.environ, QCALC_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    fast = measure(False, args.repeat)
    slow = measure(True, args.repeat)
    if fast["backend"] != "numba":
        print("numba is not installed; both runs use the Python backend", file=sys.stderr)
    print(f"{'kernel':34s} {'python [ms]':>12s} {fast['backend'] + ' [ms]':>12s} {'speedup':>8s}")
    for name in fast:
        if name == "backend":
            continue
        a, b = slow[name] * 1e3, fast[name] * 1e3
        print(f"{name:34s} {a:12.3f} {b:12.3f} {a / b:8.1f}x")


if __name__ == "__main__":
    main()
