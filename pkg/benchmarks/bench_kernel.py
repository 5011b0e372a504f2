"""Compare the compiled and pure-Python hypergeometric kernels.

    python benchmarks/bench_kernel.py [--repeat 3]

Each case runs through ``kernel.hyper_sum_mod`` with ``backend`` forced, and
both backends must return the same residue.
"""
from __future__ import annotations

import argparse
import time

from supercong import kernel
from supercong.exact_arith import PrimePowerCtx
from supercong.sums import default_guard

CASES = [
    # label, p, e, n, h
    ("S  p=5    n=5^5", 5, 6, 5**5, 3),
    ("S  p=13   n=13^3", 13, 4, 13**3, 7),
    ("S  p=31   n=31^3", 31, 4, 31**3, 16),
    ("S  p=101  n=10^5", 101, 3, 10**5, 51),
]


def s_family_args(p: int, e: int, n: int, h: int) -> tuple:
    upper = h * n - 1
    guard = default_guard(n, PrimePowerCtx(p, e))
    return (p, e, 0, n, 0, 1, [(-1, upper + 1), (2, -1)], [(1, 0), (1, 0)], -h, 1, guard)


def best_of(fn, repeat: int) -> tuple[float, int]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernel.BACKEND != "cython":
        print("compiled kernel not available; only the Python backend will run")
    print(f"{'case':<22}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for label, p, e, n, h in CASES:
        call = s_family_args(p, e, n, h)
        t_py, r_py = best_of(lambda: kernel.hyper_sum_mod(*call, backend="python"), args.repeat)
        if kernel.BACKEND == "cython":
            t_c, r_c = best_of(lambda: kernel.hyper_sum_mod(*call, backend="cython"), args.repeat)
            assert r_c == r_py, f"backends disagree on {label}"
            print(f"{label:<22}{t_py:>12.4f}{t_c:>12.4f}{t_py / t_c:>9.1f}x")
        else:
            print(f"{label:<22}{t_py:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
