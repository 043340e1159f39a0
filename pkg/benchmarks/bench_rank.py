"""Time the compiled and pure-Python rank kernels on sparse integer matrices and on real bar differentials.

Usage: python3 benchmarks/bench_rank.py [--repeat N]
"""
import argparse
import random
import time

from opbar import _kernel, fixtures as fx
from opbar._rank_py import rank_int_rows as rank_py
from opbar.bar import BarComplex
from opbar.blob import BlobSystem, standard_models
from opbar.linalg import integer_row


def signed(n_rows, n_cols, per_row, seed):
    """Sparse +-1 rows with a planted rank deficit: every fourth row is the sum of the two before it."""
    rng = random.Random(seed)
    rows = []
    for i in range(n_rows):
        if i % 4 == 3:
            a, b = rows[-1], rows[-2]
            rows.append({c: a.get(c, 0) + b.get(c, 0) for c in set(a) | set(b)})
        else:
            rows.append({c: rng.choice((-1, 1)) for c in rng.sample(range(n_cols), per_row)})
    return rows


def bar_rows(mm, m, top, eta):
    d = BarComplex(mm, m, top, eta).complex.d[top]
    return [integer_row(r) for r in d.rows if r]


def timed(fn, rows, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        r = fn(rows)
        best = min(best, time.perf_counter() - t)
    return r, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernel.rank_int_rows_c is None:
        print("compiled kernel not built; only the Python kernel is available")
        return
    s = BlobSystem(standard_models()["commuting-xy-N3"].with_N(5))
    cases = {
        "signed 400x400, 3 per row": signed(400, 400, 3, 0),
        "signed 1500x1500, 3 per row": signed(1500, 1500, 3, 1),
        "signed 300x300, 8 per row": signed(300, 300, 8, 2),
        "classical bar d_9": bar_rows(fx.classical_module(), 0, 9, {0: {0: 1}}),
        "completed bar d_3, xy model at N=5": bar_rows(s.Mbar, s.upsilon, 3, s.fbar_units),
    }
    print(f"{'case':36s} {'rank':>6s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, rows in cases.items():
        rp, tp = timed(rank_py, rows, args.repeat)
        try:
            rc, tc = timed(_kernel.rank_int_rows_c, rows, args.repeat)
        except OverflowError:
            print(f"{name:36s} {rp:6d} {tp:10.4f} {'overflow':>10s}")
            continue
        assert rc == rp, name
        print(f"{name:36s} {rp:6d} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
