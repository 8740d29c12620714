"""Pure-numpy implementations of the hot kernels.

Selected by ``fwlp._kernels`` when the compiled extension is missing or
FWLP_PURE_PYTHON=1 is set.  Semantics match ``_kernels_cy`` exactly; the
compiled module is only faster.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def unit_cap_project(w):
    """KKT point of  min -w'x + ||x||^2/2  s.t.  e'x <= 1, x >= 0.

    Returns ``(x, mu, support)`` where ``mu`` is the multiplier of the
    cap constraint and ``support`` lists the indices allowed to be
    nonzero in x.  Scan order: entries sorted descending, ties broken by
    original index, stopping at the first prefix whose multiplier
    separates it from the remaining entries.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    n = w.shape[0]
    if n == 0:
        return np.zeros(0), 0.0, np.zeros(0, dtype=np.int64)
    order = np.argsort(-w, kind="stable").astype(np.int64)
    wbar = w[order]
    csum = np.cumsum(wbar)
    mu_arr = (csum - 1.0) / np.arange(1.0, n + 1.0)
    hit = wbar >= mu_arr
    hit[: n - 1] &= wbar[1:] <= mu_arr[: n - 1]
    # a satisfying prefix always exists for finite input; J = n is defensive
    J = int(np.argmax(hit)) + 1 if hit.any() else n
    mu = float(mu_arr[J - 1])
    x = np.zeros(n)
    if mu >= 0.0:
        support = order[:J]
        x[support] = wbar[:J] - mu
    else:
        mu = 0.0
        support = np.flatnonzero(w > 0.0).astype(np.int64)
        x[support] = w[support]
    return x, mu, support


def eval_columns(indptr, indices, data, c, y, cols):
    """Dual slacks d_j = c_j - a_j'y for the requested columns only."""
    cols = np.asarray(cols, dtype=np.int64)
    out = np.empty(cols.shape[0])
    for t in range(cols.shape[0]):
        j = cols[t]
        lo, hi = indptr[j], indptr[j + 1]
        out[t] = c[j] - np.dot(data[lo:hi], y[indices[lo:hi]])
    return out


def fwlpp_run_span(indptr, indices, data, b, c, x_hat, y, ax, scale,
                   k0, nsteps, xi, eta, refresh_period, r_out, s_out):
    """Run ``nsteps`` perturbed steps k = k0 .. k0+nsteps-1 without tracing.

    Mutates ``x_hat``, ``y``, ``ax`` in place and leaves the final step
    directions in ``r_out``/``s_out``; returns the new scale factor.
    """
    m, n = b.shape[0], c.shape[0]
    A = sp.csc_matrix((data, indices, indptr), shape=(m, n))
    AT = A.T.tocsr()
    r_out[:] = 0.0
    supp_prev = np.zeros(0, dtype=np.int64)
    for k in range(k0, k0 + nsteps):
        rk = np.sqrt(float(k))
        w = (-rk / xi) * (c - AT @ y)
        xu, mu, supp = unit_cap_project(w)
        r_out[supp_prev] = 0.0
        rvals = xi * xu[supp]
        r_out[supp] = rvals
        supp_prev = supp
        fac = k / (k + 1.0)
        coef = 1.0 / (k + 1.0)
        x_hat[supp] += rvals / (k * scale)
        ax *= fac
        for t in range(supp.shape[0]):
            j = supp[t]
            lo, hi = indptr[j], indptr[j + 1]
            ax[indices[lo:hi]] += data[lo:hi] * (rvals[t] * coef)
        scale *= fac
        np.clip(rk * (b - ax), -eta, eta, out=s_out)
        y *= fac
        y += coef * s_out
        if (k + 1) % refresh_period == 0:
            x_hat *= scale
            scale = 1.0
            ax[:] = A @ x_hat
    return scale
