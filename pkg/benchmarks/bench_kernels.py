"""Compare the compiled kernels with the pure-Python fallback.

Run ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each workload is
timed with both kernel modules swapped in place; the outputs must agree.
"""

from __future__ import annotations

import argparse
import time
from contextlib import contextmanager

from qtatoms import _kernels_py, exactpoly, harmonics
from qtatoms.diagrams import Partition
from qtatoms.harmonics import derivative_span, frobenius_symfun, lattice_determinant

try:
    from qtatoms import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


@contextmanager
def use_kernels(mod):
    old = exactpoly.kernels, harmonics.kernels
    exactpoly.kernels = harmonics.kernels = mod
    try:
        yield
    finally:
        exactpoly.kernels, harmonics.kernels = old


def _span(mu, hole=None):
    cells = Partition(mu).diagram()
    if hole is not None:
        cells = cells.without(hole)
    return derivative_span(lattice_determinant(cells))


WORKLOADS = {
    "span (4,1)": lambda: _span((4, 1)).dim(),
    "span (3,2,1)/(0,0)": lambda: _span((3, 2, 1), (0, 0)).dim(),
    "span (3,1,1)": lambda: _span((3, 1, 1)).dim(),
    "frobenius (2,2,1)": lambda: frobenius_symfun(_span((2, 2, 1))),
    "span (3,2,1)": lambda: _span((3, 2, 1)).dim(),
}


def bench(fn, repeat: int) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels_c is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'workload':24} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in WORKLOADS.items():
        with use_kernels(_kernels_py):
            tp, op = bench(fn, args.repeat)
        if _kernels_c is None:
            print(f"{name:24} {tp:10.3f}")
            continue
        with use_kernels(_kernels_c):
            tc, oc = bench(fn, args.repeat)
        if op != oc:
            raise SystemExit(f"{name}: kernel outputs differ")
        print(f"{name:24} {tp:10.3f} {tc:10.3f} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
