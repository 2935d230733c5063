"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from badred import _kernels
from badred.heights import _reduce_for_torus, sphere_samples
from badred.polycore import parse_poly

CASES = [
    ("torus 1-var, N=2^18", "T0^6 - 3*T0^4 + 2*T0 + 7", 1 << 18),
    ("torus 2-var, N=512", "1 + T0 + T1 + 3*T0^2*T1 - 5*T1^3", 512),
    ("torus 3-var, N=64", "T0*T1 + T1*T2 + T2*T0 + 2 - T0^2*T2", 64),
]


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':32s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s} {'|diff|':>10s}")
    for name, text, N in CASES:
        f = parse_poly(text)
        c, e = _reduce_for_torus(f)
        tn, (an, _) = best_of(lambda: _kernels.torus_log_sum(c, e, N, 1e-12, "numba"), args.repeat)
        tp, (ap_, _) = best_of(lambda: _kernels.torus_log_sum(c, e, N, 1e-12, "numpy"), args.repeat)
        size = N ** e.shape[1]
        print(f"{name:32s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f} {abs(an - ap_) / size:10.2e}")
    f = parse_poly("T0^3 + 2*T1^3 - 7*T0*T1*T2 + T2^3 - T3^3")
    coeffs = np.array([complex(v) for v in f.terms.values()])
    exps = np.array(list(f.terms), dtype=np.int64)
    pts = np.concatenate(list(sphere_samples(f.nvars, 200_000, 0)))
    tn, vn = best_of(lambda: _kernels.log_abs_at(coeffs, exps, pts, backend="numba"), args.repeat)
    tp, vp = best_of(lambda: _kernels.log_abs_at(coeffs, exps, pts, backend="numpy"), args.repeat)
    print(f"{'sphere log|f|, 200k points':32s} {tn:10.4f} {tp:10.4f} {tp / tn:8.1f} {np.max(np.abs(vn - vp)):10.2e}")


if __name__ == "__main__":
    main()
