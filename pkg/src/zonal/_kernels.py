"""Hot loops for the Monte Carlo estimators.

Each kernel exists twice: a numba ``@njit`` version and a vectorized numpy
version with identical semantics.  The numba path is used when numba
imports and ``ZONAL_DISABLE_NUMBA`` is unset (or ``0``); otherwise the numpy
path is used.  Both are importable directly for benchmarking.
"""
from __future__ import annotations

import os
from itertools import combinations

import numpy as np

_DISABLED = os.environ.get("ZONAL_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by ZONAL_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def subset_table(N: int, upto: int):
    """Row subsets of sizes 1..upto, padded into one int array.

    Returns ``(rows, sizes)``: ``rows[r, :sizes[r]]`` is the r-th subset.
    """
    rows, sizes = [], []
    for j in range(1, upto + 1):
        for s in combinations(range(N), j):
            rows.append(list(s) + [0] * (upto - j))
            sizes.append(j)
    return np.array(rows, dtype=np.int64).reshape(-1, max(upto, 1)), np.array(sizes, dtype=np.int64)


def subset_weights(x: np.ndarray, rows: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    w = np.ones(len(sizes), dtype=np.complex128)
    for r, j in enumerate(sizes):
        for i in rows[r, :j]:
            w[r] *= x[i]
    return w


# numpy path


def orthonormalize_numpy(G: np.ndarray) -> np.ndarray:
    """QR with positive-diagonal R, last column flipped where det = -1."""
    Q, R = np.linalg.qr(G)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    Q = Q * d[:, None, :]
    neg = np.linalg.det(Q) < 0
    Q[neg, :, -1] *= -1.0
    return Q


# Xi_j is divided by its Gram sum sum_S minor^2, which is 1 for orthonormal
# columns; this cancels rounding so Xi_j = 1 exactly at x = (1, ..., 1).


def xi_numpy(Q: np.ndarray, rows: np.ndarray, sizes: np.ndarray, weights: np.ndarray, upto: int) -> np.ndarray:
    S = Q.shape[0]
    out = np.zeros((S, upto), dtype=np.complex128)
    gram = np.zeros((S, upto))
    for r in range(len(sizes)):
        j = sizes[r]
        minors = np.linalg.det(Q[:, rows[r, :j]][:, :, :j])
        out[:, j - 1] += minors * minors * weights[r]
        gram[:, j - 1] += minors * minors
    return out / gram


# numba path

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _det_inplace(M, n):
        # determinant of M[:n, :n] by partial pivoting; M is overwritten
        if n == 1:
            return M[0, 0]
        if n == 2:
            return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        det = 1.0
        for c in range(n):
            p = c
            best = abs(M[c, c])
            for r in range(c + 1, n):
                if abs(M[r, c]) > best:
                    best = abs(M[r, c])
                    p = r
            if best == 0.0:
                return 0.0
            if p != c:
                for k in range(n):
                    tmp = M[c, k]
                    M[c, k] = M[p, k]
                    M[p, k] = tmp
                det = -det
            det *= M[c, c]
            for r in range(c + 1, n):
                f = M[r, c] / M[c, c]
                for k in range(c, n):
                    M[r, k] -= f * M[c, k]
        return det

    @njit(cache=True, nogil=True)
    def orthonormalize_numba(G):
        S, n, _ = G.shape
        Q = np.empty_like(G)
        v = np.empty(n)
        buf = np.empty((n, n))
        for s in range(S):
            for j in range(n):
                for i in range(n):
                    v[i] = G[s, i, j]
                # modified Gram-Schmidt, two passes
                for _ in range(2):
                    for k in range(j):
                        dot = 0.0
                        for i in range(n):
                            dot += Q[s, i, k] * v[i]
                        for i in range(n):
                            v[i] -= dot * Q[s, i, k]
                nrm = 0.0
                for i in range(n):
                    nrm += v[i] * v[i]
                nrm = np.sqrt(nrm)
                for i in range(n):
                    Q[s, i, j] = v[i] / nrm
            buf[:, :] = Q[s]
            if _det_inplace(buf, n) < 0.0:
                for i in range(n):
                    Q[s, i, n - 1] = -Q[s, i, n - 1]
        return Q

    @njit(cache=True, nogil=True)
    def xi_numba(Q, rows, sizes, weights, upto):
        S = Q.shape[0]
        out = np.zeros((S, upto), dtype=np.complex128)
        gram = np.zeros(upto)
        R = sizes.shape[0]
        buf = np.empty((upto, upto))
        for s in range(S):
            gram[:] = 0.0
            for r in range(R):
                j = sizes[r]
                for a in range(j):
                    for b in range(j):
                        buf[a, b] = Q[s, rows[r, a], b]
                m = _det_inplace(buf, j)
                out[s, j - 1] += m * m * weights[r]
                gram[j - 1] += m * m
            for j in range(upto):
                out[s, j] /= gram[j]
        return out

    orthonormalize = orthonormalize_numba
    xi_batch = xi_numba
else:
    orthonormalize_numba = None
    xi_numba = None
    orthonormalize = orthonormalize_numpy
    xi_batch = xi_numpy
