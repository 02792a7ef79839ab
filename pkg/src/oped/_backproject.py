"""Compiled per-point accumulation loops.

Every point's value is a sum over views in ascending order, computed by one
worker, so results do not depend on the thread count.
"""

import importlib.util
import os

import numba
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # Skip numba's TBB probe (it warns on old TBB builds).
    has_omp = importlib.util.find_spec("numba.np.ufunc.omppool") is not None
    numba.config.THREADING_LAYER = "omp" if has_omp else "workqueue"

_BLOCK = 256


@numba.njit(parallel=True, cache=True)
def chebyshev_series_sum(px, py, cos_phi, sin_phi, coeffs):
    """``sum_nu sum_k coeffs[nu, k] U_k(x cos phi_nu + y sin phi_nu)`` at each point (Clenshaw)."""
    n = px.size
    n_views, n_k = coeffs.shape
    out = np.zeros(n)
    n_blocks = (n + _BLOCK - 1) // _BLOCK
    for blk in numba.prange(n_blocks):
        lo = blk * _BLOCK
        hi = min(lo + _BLOCK, n)
        w = hi - lo
        acc = np.zeros(w)
        t2 = np.empty(w)
        b1 = np.empty(w)
        b2 = np.empty(w)
        for v in range(n_views):
            cp = cos_phi[v]
            sp = sin_phi[v]
            for c in range(w):
                t = px[lo + c] * cp + py[lo + c] * sp
                if t > 1.0:
                    t = 1.0
                elif t < -1.0:
                    t = -1.0
                t2[c] = 2.0 * t
                b1[c] = 0.0
                b2[c] = 0.0
            for k in range(n_k - 1, -1, -1):
                s = coeffs[v, k]
                for c in range(w):
                    b0 = s + t2[c] * b1[c] - b2[c]
                    b2[c] = b1[c]
                    b1[c] = b0
            for c in range(w):
                acc[c] += b1[c]
        for c in range(w):
            out[lo + c] = acc[c]
    return out


@numba.njit(parallel=True, cache=True)
def accumulate_view(acc, t, th, alpha_row, inv_h, offset):
    """Add one view's interpolated ``alpha(theta) / sin(theta)`` to ``acc``.

    ``th`` holds ``arccos(t)``, computed by the caller with a vectorized arccos.
    """
    l_max = alpha_row.size - 2
    for i in numba.prange(acc.size):
        pos = th[i] * inv_h - offset
        l = int(np.floor(pos))
        if l < 0:
            l = 0
        elif l > l_max:
            l = l_max
        u = pos - l
        tt = t[i]
        acc[i] += ((1.0 - u) * alpha_row[l] + u * alpha_row[l + 1]) / np.sqrt((1.0 - tt) * (1.0 + tt))
