"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]

Both backends receive identical inputs; the script also checks that their
outputs agree before reporting timings.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from toporecon import _kernels_py, alpha_filtration
from toporecon.delaunay import _initial_simplex, insertion_order
from toporecon.predicates import Predicates
from toporecon.synthetic import sample_sphere

try:
    from toporecon import _kernels as _compiled
except ImportError:
    _compiled = None


def _best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_delaunay(points: np.ndarray, repeat: int):
    first = _initial_simplex(Predicates(points))
    order = insertion_order(points, first, seed=0)
    rows = {}
    for name, mod in (("python", _kernels_py), ("compiled", _compiled)):
        if mod is None:
            continue
        rows[name] = _best_of(
            lambda: mod.delaunay_tets(points, order, first, 0, Predicates(points)), repeat)
    return rows


def bench_reduction(points: np.ndarray, repeat: int):
    f = alpha_filtration(points)
    rows = {}
    for name, mod in (("python", _kernels_py), ("compiled", _compiled)):
        if mod is None:
            continue
        rows[name] = _best_of(lambda: mod.reduce_boundary(f.indptr, f.indices, f.dims), repeat)
    return rows, len(f)


def _sorted_rows(t):
    t = np.asarray(t)
    return t[np.lexsort(t.T[::-1])]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, nargs="+", default=[1000, 4000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; timing the Python fallback only")
    print(f"{'kernel':<12}{'points':>8}{'size':>10}{'python s':>12}{'compiled s':>12}{'speedup':>9}")
    for n in args.points:
        pts = sample_sphere(n, noise=0.005, rng=0)
        d = bench_delaunay(pts, args.repeat)
        r, n_simplices = bench_reduction(pts, args.repeat)
        for name, rows, size in (("delaunay", d, len(d["python"][1])),
                                 ("reduction", r, n_simplices)):
            tp = rows["python"][0]
            if "compiled" in rows:
                tc = rows["compiled"][0]
                if name == "delaunay":
                    same = np.array_equal(_sorted_rows(rows["python"][1]),
                                          _sorted_rows(rows["compiled"][1]))
                else:
                    same = np.array_equal(np.asarray(rows["python"][1]),
                                          np.asarray(rows["compiled"][1]))
                if not same:
                    raise SystemExit(f"{name}: backends disagree at n={n}")
                print(f"{name:<12}{n:>8}{size:>10}{tp:>12.4f}{tc:>12.4f}{tp / tc:>8.1f}x")
            else:
                print(f"{name:<12}{n:>8}{size:>10}{tp:>12.4f}{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()
