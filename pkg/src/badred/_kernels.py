"""Floating-point evaluation kernels.

Two interchangeable backends: numba ``@njit`` loops and plain numpy
broadcasting.  ``BADRED_KERNELS=numpy`` forces the fallback; otherwise numba
is used when it imports.
"""

from __future__ import annotations

import os

import numpy as np

TWO_PI = 2.0 * np.pi
# deterministic shifts (fractions of a grid step) tried when a sample lands
# on the zero set; golden-ratio multiples avoid the lattice itself
_JITTER = np.array([0.381966011250105, 0.236067977499790, 0.145898033750315])

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover
    numba = None

_requested = os.environ.get("BADRED_KERNELS", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"BADRED_KERNELS must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numpy" if _requested == "numpy" or numba is None else "numba"


# ---------------------------------------------------------------------------
# numpy reference implementations


def _torus_values_np(coeffs, exps, idx, N, shift):
    t = (idx + 0.5 + shift) / N
    z = np.exp(1j * TWO_PI * t)                      # (P, k)
    mon = np.prod(z[:, None, :] ** exps[None, :, :], axis=2)
    return mon @ coeffs


def torus_log_sum_np(coeffs, exps, N, thresh, chunk=1 << 15):
    """Sum of ``log|f|`` over the midpoint grid ``((j + 1/2) / N)^k`` and the
    number of samples that needed a jittered re-evaluation."""
    k = exps.shape[1]
    total = N ** k
    acc = 0.0
    jittered = 0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        idx = np.empty((flat.size, k), dtype=np.float64)
        rem = flat
        for d in range(k):
            idx[:, d] = rem % N
            rem = rem // N
        a = np.abs(_torus_values_np(coeffs, exps, idx, N, 0.0))
        bad = np.nonzero(a < thresh)[0]
        for b in bad:
            jittered += 1
            val = thresh
            for s in _JITTER:
                v = abs(_torus_values_np(coeffs, exps, idx[b:b + 1], N, s)[0])
                if v >= thresh:
                    val = v
                    break
            a[b] = val
        acc += np.log(a).sum()
    return acc, jittered


def log_abs_at_np(coeffs, exps, pts, floor, chunk=1 << 14):
    out = np.empty(pts.shape[0])
    for s in range(0, pts.shape[0], chunk):
        z = pts[s:s + chunk]
        mon = np.prod(z[:, None, :] ** exps[None, :, :], axis=2)
        out[s:s + chunk] = np.log(np.maximum(np.abs(mon @ coeffs), floor))
    return out


# ---------------------------------------------------------------------------
# numba implementations

if numba is not None:

    @njit(cache=True)
    def _eval_torus_nb(coeffs, exps, idx, N, shift, z):
        k = exps.shape[1]
        for d in range(k):
            z[d] = np.exp(1j * TWO_PI * (idx[d] + 0.5 + shift) / N)
        s = 0.0 + 0.0j
        for m in range(coeffs.shape[0]):
            term = coeffs[m]
            for d in range(k):
                e = exps[m, d]
                if e:
                    term *= z[d] ** e
            s += term
        return abs(s)

    @njit(cache=True)
    def torus_log_sum_nb(coeffs, exps, N, thresh):
        k = exps.shape[1]
        m = coeffs.shape[0]
        maxe = 0
        for i in range(m):
            for d in range(k):
                if exps[i, d] > maxe:
                    maxe = exps[i, d]
        # power table w[e, j] = exp(2 pi i e (j + 1/2) / N)
        w = np.empty((maxe + 1, N), dtype=np.complex128)
        for j in range(N):
            base = np.exp(1j * TWO_PI * (j + 0.5) / N)
            w[0, j] = 1.0
            for e in range(1, maxe + 1):
                w[e, j] = w[e - 1, j] * base
        total = N ** k
        idx = np.zeros(k, dtype=np.int64)
        z = np.empty(k, dtype=np.complex128)
        acc = 0.0
        comp = 0.0
        jittered = 0
        for _ in range(total):
            s = 0.0 + 0.0j
            for i in range(m):
                term = coeffs[i]
                for d in range(k):
                    term *= w[exps[i, d], idx[d]]
                s += term
            a = abs(s)
            if a < thresh:
                jittered += 1
                val = thresh
                for q in range(_JITTER.shape[0]):
                    v = _eval_torus_nb(coeffs, exps, idx, N, _JITTER[q], z)
                    if v >= thresh:
                        val = v
                        break
                a = val
            # Kahan summation keeps 4M-term sums at full precision
            y = np.log(a) - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
            d = 0
            while d < k:
                idx[d] += 1
                if idx[d] < N:
                    break
                idx[d] = 0
                d += 1
        return acc, jittered

    @njit(cache=True)
    def log_abs_at_nb(coeffs, exps, pts, floor):
        P = pts.shape[0]
        k = exps.shape[1]
        maxe = 0
        for i in range(exps.shape[0]):
            for d in range(k):
                if exps[i, d] > maxe:
                    maxe = exps[i, d]
        pw = np.empty((k, maxe + 1), dtype=np.complex128)
        out = np.empty(P)
        for p in range(P):
            for d in range(k):
                pw[d, 0] = 1.0
                for e in range(1, maxe + 1):
                    pw[d, e] = pw[d, e - 1] * pts[p, d]
            s = 0.0 + 0.0j
            for i in range(coeffs.shape[0]):
                term = coeffs[i]
                for d in range(k):
                    term *= pw[d, exps[i, d]]
                s += term
            a = abs(s)
            out[p] = np.log(a if a > floor else floor)
        return out


def torus_log_sum(coeffs, exps, N, thresh, backend=None):
    backend = backend or BACKEND
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    if backend == "numba":
        acc, jit = torus_log_sum_nb(coeffs, exps, int(N), float(thresh))
        return float(acc), int(jit)
    return torus_log_sum_np(coeffs, exps, int(N), float(thresh))


def log_abs_at(coeffs, exps, pts, floor=1e-300, backend=None):
    backend = backend or BACKEND
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    pts = np.ascontiguousarray(pts, dtype=np.complex128)
    if backend == "numba":
        return log_abs_at_nb(coeffs, exps, pts, float(floor))
    return log_abs_at_np(coeffs, exps, pts, float(floor))
