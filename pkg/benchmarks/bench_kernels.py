"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once under JIT (after a warm-up call that compiles it) and
once with JIT switched off; results are compared before timings are shown.
"""

import argparse
import time

import numpy as np

from nonassoc import builtin, jit_available, set_jit
from nonassoc._kernels import contract, durand_kerner, paired


def _time(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    S = builtin("sedenions")
    T = np.asarray(S.table, dtype=np.int64)
    n = S.dim
    rng = np.random.default_rng(0)
    X = rng.integers(-3, 4, (n * n, n)).astype(np.int64)
    Y = rng.integers(-3, 4, (n, n)).astype(np.int64)
    U = rng.integers(-3, 4, (20000, n)).astype(np.int64)
    V = rng.integers(-3, 4, (20000, n)).astype(np.int64)
    Tf = T.astype(float)
    Uf, Vf = U.astype(float), V.astype(float)
    poly = np.poly(rng.standard_normal(24) + 1j * rng.standard_normal(24))
    yield "contract int64 (256x16 by 16x16, sedenions)", lambda: contract(X, Y, T)
    yield "paired int64 (20000 rows, sedenions)", lambda: paired(U, V, T)
    yield "paired float64 (20000 rows, sedenions)", lambda: paired(Uf, Vf, Tf)
    yield "durand-kerner degree 24", lambda: durand_kerner(poly)[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not jit_available():
        print("numba is not installed; only the numpy path can run")
    print(f"{'kernel':<44} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for label, fn in cases():
        set_jit(True)
        fast = fn()
        t_jit = _time(fn, args.repeat)
        set_jit(False)
        slow = fn()
        t_np = _time(fn, args.repeat)
        set_jit(True)
        if label.startswith("durand"):
            same = np.allclose(np.sort_complex(fast), np.sort_complex(slow), atol=1e-6)
        else:
            same = np.allclose(fast, slow)
        flag = "" if same else "  MISMATCH"
        print(f"{label:<44} {t_jit * 1e3:>8.2f}ms {t_np * 1e3:>8.2f}ms {t_np / t_jit:>7.1f}x{flag}")


if __name__ == "__main__":
    main()
