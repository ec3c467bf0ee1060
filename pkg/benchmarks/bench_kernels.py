"""Time the compiled and pure-Python sweep kernels on the same ranges.

    python3 benchmarks/bench_kernels.py --bound 2000 --repeat 3

Both backends are run on identical inputs and their statistics are compared
before timings are reported, so a speedup is only shown for matching results.
"""
import argparse
import sys
import time

from abclab import kernels
from abclab.arith import build_spf_sieve


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(x, y):
    if isinstance(x, dict):
        return x.keys() == y.keys() and all(_same(x[k], y[k]) for k in x)
    if hasattr(x, "tolist"):
        return x.tolist() == y.tolist()
    if isinstance(x, float):
        return abs(x - y) <= 1e-9 * max(1.0, abs(x))
    return x == y


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if "cython" not in kernels.BACKENDS:
        print("compiled backend not built; only the Python kernels are available", file=sys.stderr)
        return 1
    spf = build_spf_sieve(args.bound).spf
    cases = {
        "count_pairs": lambda k: k.count_pairs(2, args.bound),
        "triple_rows": lambda k: k.triple_rows(spf, 2, args.bound, 0.0, 0.0),
        "gamma_sweep n=5": lambda k: k.gamma_sweep(spf, 2, args.bound, 5)[0],
        "power_sweep m=5": lambda k: k.power_sweep(spf, 2, args.bound, 5)[0],
    }
    print(f"bound={args.bound} triples={kernels.get_backend('cython').count_pairs(2, args.bound)}")
    print(f"{'kernel':<18}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    status = 0
    for name, fn in cases.items():
        t_py, r_py = _best_of(lambda: fn(kernels.get_backend("python")), args.repeat)
        t_c, r_c = _best_of(lambda: fn(kernels.get_backend("cython")), args.repeat)
        agree = _same(r_py, r_c)
        status |= not agree
        print(f"{name:<18}{t_py:>12.4f}{t_c:>12.4f}{t_py / t_c:>9.1f}x" + ("" if agree else "  MISMATCH"))
    return status


if __name__ == "__main__":
    sys.exit(main())
