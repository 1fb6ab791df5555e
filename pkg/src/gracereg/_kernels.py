"""Numba inner loops for cyclical coordinate descent.

All kernels work on the standardized scale with the penalty expressed as
``l1`` = lambda1/(2n) (soft-threshold level) and ``l2`` = lambda2/n
(smoothness multiplier), so that one coordinate pass exactly minimizes
(1/2n)||y - X beta||^2 + l1 ||beta||_1 + (l2/2) beta' L beta coordinate
by coordinate.  ``XT`` is the (p, n) row-contiguous transpose of the
design; ``r`` is the running full residual y - X beta.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def cd_sweep(XT, r, beta, col2n, diag, indptr, indices, data, l1, l2, order):
    """One pass over the coordinates in ``order``; returns the max update."""
    n = r.shape[0]
    max_delta = 0.0
    for k in range(order.shape[0]):
        u = order[k]
        xu = XT[u]
        dot = 0.0
        for i in range(n):
            dot += xu[i] * r[i]
        z = dot / n + col2n[u] * beta[u]
        for j in range(indptr[u], indptr[u + 1]):
            z -= l2 * data[j] * beta[indices[j]]
        az = abs(z) - l1
        if az > 0.0:
            new = (az if z > 0.0 else -az) / (col2n[u] + l2 * diag[u])
        else:
            new = 0.0
        d = new - beta[u]
        if d != 0.0:
            for i in range(n):
                r[i] -= d * xu[i]
            beta[u] = new
            if abs(d) > max_delta:
                max_delta = abs(d)
    return max_delta


@njit(cache=True, nogil=True)
def kkt_residual(XT, r, beta, diag, indptr, indices, data, l1, l2):
    """Max violation of the subgradient optimality conditions.

    For beta_u != 0 this is |g_u + l1 sign(beta_u)| where g_u is the
    gradient of the smooth part; for beta_u = 0 it is (|g_u| - l1)_+.
    """
    p, n = XT.shape
    worst = 0.0
    for u in range(p):
        xu = XT[u]
        dot = 0.0
        for i in range(n):
            dot += xu[i] * r[i]
        g = -dot / n + l2 * diag[u] * beta[u]
        for j in range(indptr[u], indptr[u + 1]):
            g += l2 * data[j] * beta[indices[j]]
        if beta[u] > 0.0:
            v = abs(g + l1)
        elif beta[u] < 0.0:
            v = abs(g - l1)
        else:
            v = abs(g) - l1
            if v < 0.0:
                v = 0.0
        if v > worst:
            worst = v
    return worst


@njit(cache=True, nogil=True)
def penalty_quadratic(beta, diag, indptr, indices, data):
    """beta' L beta from the sparse representation."""
    p = beta.shape[0]
    val = 0.0
    for u in range(p):
        acc = diag[u] * beta[u]
        for j in range(indptr[u], indptr[u + 1]):
            acc += data[j] * beta[indices[j]]
        val += beta[u] * acc
    return val
