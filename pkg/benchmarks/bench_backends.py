#!/usr/bin/env python3
"""Side-by-side timing of the numba and numpy Gowers-count kernels.

Both paths must return identical tallies; the script exits non-zero if not.

    python3 benchmarks/bench_backends.py [--big]
"""
import argparse
import sys
import time

from strengthlab import GF, _config, value_table
from strengthlab.experiments import make_rng, random_homogeneous
from strengthlab.kernels import gowers_counts

CASES = [  # (p, n, d, m)
    (5, 1, 3, 3),
    (5, 2, 3, 2),
    (5, 2, 3, 3),
    (7, 2, 3, 3),
]
BIG = [(5, 3, 3, 3)]  # about 2.4e8 tuples


def _time(vals, p, D, m, backend):
    _config.set_backend(backend)
    t0 = time.perf_counter()
    counts = gowers_counts(vals, p, D, m)
    return time.perf_counter() - t0, counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--big", action="store_true", help="include the n=3 cubic (numpy path takes ~15 s)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    # warm up the JIT so compilation is not counted
    t0 = time.perf_counter()
    _time(value_table(random_homogeneous(GF(3), 1, 2, make_rng(0))).values, 3, 1, 2, "numba")
    print(f"numba warmup: {time.perf_counter() - t0:.1f}s\n")

    print(f"{'p':>3} {'n':>2} {'m':>2} {'tuples':>12}  {'numpy (s)':>10}  {'numba (s)':>10}  {'speedup':>8}  match")
    print("-" * 70)
    ok = True
    rng = make_rng(args.seed)
    for p, n, d, m in CASES + (BIG if args.big else []):
        P = random_homogeneous(GF(p), n, d, rng)
        vals = value_table(P).values
        t_np, c_np = _time(vals, p, n, m, "numpy")
        t_nb, c_nb = _time(vals, p, n, m, "numba")
        same = c_np.tolist() == c_nb.tolist()
        ok &= same
        tuples = (p**n) ** (m + 1)
        print(f"{p:>3} {n:>2} {m:>2} {tuples:>12}  {t_np:>10.3f}  {t_nb:>10.3f}  {t_np / t_nb:>7.1f}x  {'ok' if same else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
