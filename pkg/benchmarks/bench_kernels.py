"""Compare the compiled and pure-Python echelon kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 8 16 32 48]

Reports the best-of-``repeat`` time for row-echelon forms of random integer
matrices (one mostly full rank, one of low rank), then times a structural
analysis of generated networks under each backend. The second part runs in
subprocesses, since the backend is fixed at import.
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from crndecomp.exactla import _pykernel

try:
    from crndecomp.exactla import _ckernel
except ImportError:  # extension not built
    _ckernel = None

ANALYZE_SNIPPET = """
import random, time
from crndecomp.exactla import BACKEND
from crndecomp.generators import random_network
from crndecomp.structure import analyze
from crndecomp.decomposition import finest_independent_decomposition
nets = [random_network(random.Random(s), m=12, n_complexes=24, n_classes=3, extra_edges=8) for s in range(60)]
t = time.perf_counter()
for net in nets:
    analyze(net)
    finest_independent_decomposition(net)
print(BACKEND, time.perf_counter() - t)
"""


def random_rows(rng: random.Random, n: int, rank: int | None = None, bound: int = 9) -> list[list[int]]:
    if rank is None:
        return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
    A = [[rng.randint(-3, 3) for _ in range(rank)] for _ in range(n)]
    B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rank)]
    return [[sum(A[i][k] * B[k][j] for k in range(rank)) for j in range(n)] for i in range(n)]


def best(fn, rows, n: int, repeat: int) -> float:
    timer = timeit.Timer(lambda: fn([r[:] for r in rows], n))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=loops)) / loops


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 48])
    args = ap.parse_args(argv)

    rng = random.Random(0)
    print(f"{'matrix':>16} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for n in args.sizes:
        for label, rows in (("full", random_rows(rng, n, bound=3)), ("rank n/4", random_rows(rng, n, rank=max(1, n // 4)))):
            tp = best(_pykernel.echelon, rows, n, args.repeat)
            if _ckernel is None:
                print(f"{n:>4}x{n:<4}{label:>8} {tp * 1e3:>10.3f}ms {'n/a':>12}")
                continue
            try:
                tc = best(_ckernel.echelon, rows, n, args.repeat)
            except OverflowError:
                print(f"{n:>4}x{n:<4}{label:>8} {tp * 1e3:>10.3f}ms {'overflow':>12}")
                continue
            print(f"{n:>4}x{n:<4}{label:>8} {tp * 1e3:>10.3f}ms {tc * 1e3:>10.3f}ms {tp / tc:>7.1f}x")

    print("\nanalyze + finest independent decomposition, 60 networks (m=12, 24 complexes)")
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("CRNDECOMP_PURE_PYTHON", None)
        if pure:
            env["CRNDECOMP_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", ANALYZE_SNIPPET], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        print(f"  {backend:>8}: {float(seconds):.3f} s")


if __name__ == "__main__":
    main()
