"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Times each hot kernel in isolation, then two end-to-end workloads that
exercise them (a spin-2 reconstruction and a 4-level entropy minimization).
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from spintomo import _backend
from spintomo.minimizer import minimize
from spintomo.state import random_density, random_unitary
from spintomo.su2 import HalfInteger, quadrature_grid
from spintomo.tomography import round_trip


def _workloads():
    rng = np.random.default_rng(0)
    rho4 = np.asarray(random_density(4, seed=1))
    rho6 = np.asarray(random_density(6, seed=2))
    u6 = random_unitary(6, rng)
    us = np.stack([random_unitary(4, rng) for _ in range(1000)])
    p = rng.random(64)
    p /= p.sum()
    quad = quadrature_grid(8)
    spin2 = random_density(5, seed=3)
    return {
        "small_d 2j=4": (lambda k: k.small_d(4, 1.1), 2000),
        "small_d 2j=12": (lambda k: k.small_d(12, 1.1), 200),
        "rotated_diagonal n=6": (lambda k: k.rotated_diagonal(u6, rho6), 5000),
        "rotated_diagonals 1000x4": (lambda k: k.rotated_diagonals(us, rho4), 20),
        "shannon n=64": (lambda k: k.shannon(p), 5000),
        "round trip j=2": (lambda k: round_trip(spin2, HalfInteger(4), quad), 1),
        "minimize n=4": (lambda k: minimize(rho4, seed=0), 1),
    }


def run(repeat):
    names = _backend.available()
    previous = _backend.kernels
    rows = []
    try:
        for label, (fn, number) in _workloads().items():
            row = {"workload": label}
            for name in names:
                k = _backend.use(name)
                best = min(timeit.repeat(lambda: fn(k), number=number, repeat=repeat)) / number
                row[name] = best
            rows.append(row)
    finally:
        _backend.kernels = previous
    return names, rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write the raw timings here")
    args = parser.parse_args(argv)
    names, rows = run(args.repeat)
    header = f"{'workload':<26}" + "".join(f"{n:>14}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for row in rows:
        line = f"{row['workload']:<26}" + "".join(f"{row[n] * 1e6:>11.1f} us" for n in names)
        if len(names) > 1:
            line += f"{row['python'] / row['cython']:>9.1f}x"
        print(line)
    if len(names) == 1:
        print("compiled kernels not built; only the Python backend was timed", file=sys.stderr)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
