# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: unit-cap projection, batched dual-slack
evaluation, and the perturbed-solver inner loop.

Must stay semantically identical to ``_kernels_pure``; the dispatch
module picks whichever is available.
"""
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc, qsort

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef struct SortPair:
    double v
    long long i


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    # descending by value, ties by ascending original index
    cdef const SortPair* pa = <const SortPair*> a
    cdef const SortPair* pb = <const SortPair*> b
    if pa.v > pb.v:
        return -1
    if pa.v < pb.v:
        return 1
    if pa.i < pb.i:
        return -1
    if pa.i > pb.i:
        return 1
    return 0


cdef long long _unit_cap_core(const double* w, long long n, SortPair* pairs,
                              double* x, long long* support,
                              double* mu_out) noexcept nogil:
    """Fill x (pre-zeroed on the relevant entries) and support; return
    the support size and write the cap multiplier to mu_out."""
    cdef long long j, J = 0, cnt = 0
    cdef double csum = 0.0, mu = 0.0
    for j in range(n):
        pairs[j].v = w[j]
        pairs[j].i = j
    qsort(pairs, <size_t> n, sizeof(SortPair), _cmp_desc)
    for j in range(n):
        csum += pairs[j].v
        mu = (csum - 1.0) / (j + 1.0)
        if pairs[j].v >= mu and (j == n - 1 or pairs[j + 1].v <= mu):
            J = j + 1
            break
    if J == 0:  # unreachable for finite input; defensive
        J = n
    if mu >= 0.0:
        for j in range(J):
            x[pairs[j].i] = pairs[j].v - mu
            support[j] = pairs[j].i
        cnt = J
    else:
        mu = 0.0
        for j in range(n):
            if w[j] > 0.0:
                x[j] = w[j]
                support[cnt] = j
                cnt += 1
    mu_out[0] = mu
    return cnt


cdef long long _unit_cap_from_order(const double* w, const long long* order,
                                    long long n, double* x,
                                    long long* support,
                                    double* mu_out) noexcept nogil:
    """Scan/construction half of the projection given a descending order
    (ties by original index); same contract as _unit_cap_core."""
    cdef long long j, J = 0, cnt = 0
    cdef double csum = 0.0, mu = 0.0, wj
    for j in range(n):
        wj = w[order[j]]
        csum += wj
        mu = (csum - 1.0) / (j + 1.0)
        if wj >= mu and (j == n - 1 or w[order[j + 1]] <= mu):
            J = j + 1
            break
    if J == 0:  # unreachable for finite input; defensive
        J = n
    if mu >= 0.0:
        for j in range(J):
            x[order[j]] = w[order[j]] - mu
            support[j] = order[j]
        cnt = J
    else:
        mu = 0.0
        for j in range(n):
            if w[j] > 0.0:
                x[j] = w[j]
                support[cnt] = j
                cnt += 1
    mu_out[0] = mu
    return cnt


def unit_cap_project(w):
    """See ``_kernels_pure.unit_cap_project``.

    Sorting goes through numpy (its specialized double sort beats a
    comparator-callback qsort on large inputs); the scan and the
    construction of the solution run as C loops.
    """
    warr = np.ascontiguousarray(w, dtype=np.float64)
    cdef long long n = warr.shape[0]
    if n == 0:
        return np.zeros(0), 0.0, np.zeros(0, dtype=np.int64)
    order_arr = np.argsort(-warr, kind="stable").astype(np.int64, copy=False)
    x_arr = np.zeros(n, dtype=np.float64)
    supp_arr = np.empty(n, dtype=np.int64)
    cdef double[::1] wv = warr
    cdef long long[::1] order = order_arr
    cdef double[::1] x = x_arr
    cdef long long[::1] supp = supp_arr
    cdef double mu = 0.0
    cdef long long cnt
    with nogil:
        cnt = _unit_cap_from_order(&wv[0], &order[0], n, &x[0], &supp[0], &mu)
    return x_arr, float(mu), supp_arr[:cnt].copy()


def eval_columns(long long[::1] indptr, long long[::1] indices,
                 double[::1] data, double[::1] c, double[::1] y,
                 cols):
    """Dual slacks d_j = c_j - a_j'y for the requested columns only."""
    cdef long long[::1] cv = np.ascontiguousarray(cols, dtype=np.int64)
    cdef long long q = cv.shape[0]
    out_arr = np.empty(q, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef long long t, j, p
    cdef double acc
    with nogil:
        for t in range(q):
            j = cv[t]
            acc = 0.0
            for p in range(indptr[j], indptr[j + 1]):
                acc += data[p] * y[indices[p]]
            out[t] = c[j] - acc
    return out_arr


def fwlpp_run_span(long long[::1] indptr, long long[::1] indices,
                   double[::1] data, double[::1] b, double[::1] c,
                   double[::1] x_hat, double[::1] y, double[::1] ax,
                   double scale, long long k0, long long nsteps,
                   double xi, double eta, long long refresh_period,
                   double[::1] r_out, double[::1] s_out):
    """See ``_kernels_pure.fwlpp_run_span``."""
    cdef long long m = b.shape[0], n = c.shape[0]
    if nsteps <= 0:
        return scale
    wbuf_arr = np.empty(n, dtype=np.float64)
    xbuf_arr = np.zeros(n, dtype=np.float64)
    sbuf_arr = np.empty(n, dtype=np.int64)
    cdef double[::1] w = wbuf_arr
    cdef double[::1] xu = xbuf_arr
    cdef long long[::1] supp = sbuf_arr
    cdef SortPair* pairs = <SortPair*> malloc(<size_t> n * sizeof(SortPair))
    if pairs == NULL:
        raise MemoryError()
    cdef long long step, k, i, j, p, t, cnt = 0, prev_cnt = 0
    cdef double rk, fac, coef, mu = 0.0, acc, rv
    try:
        with nogil:
            for i in range(n):
                r_out[i] = 0.0
            for step in range(nsteps):
                k = k0 + step
                rk = sqrt(<double> k)
                for j in range(n):
                    acc = 0.0
                    for p in range(indptr[j], indptr[j + 1]):
                        acc += data[p] * y[indices[p]]
                    w[j] = -rk * (c[j] - acc) / xi
                for t in range(prev_cnt):
                    xu[supp[t]] = 0.0
                    r_out[supp[t]] = 0.0
                cnt = _unit_cap_core(&w[0], n, pairs, &xu[0], &supp[0], &mu)
                fac = k / (k + 1.0)
                coef = 1.0 / (k + 1.0)
                for i in range(m):
                    ax[i] *= fac
                for t in range(cnt):
                    j = supp[t]
                    rv = xi * xu[j]
                    r_out[j] = rv
                    x_hat[j] += rv / (k * scale)
                    for p in range(indptr[j], indptr[j + 1]):
                        ax[indices[p]] += data[p] * (rv * coef)
                scale *= fac
                prev_cnt = cnt
                for i in range(m):
                    rv = rk * (b[i] - ax[i])
                    if rv > eta:
                        rv = eta
                    elif rv < -eta:
                        rv = -eta
                    s_out[i] = rv
                    y[i] = fac * y[i] + coef * rv
                if (k + 1) % refresh_period == 0:
                    for j in range(n):
                        x_hat[j] *= scale
                    scale = 1.0
                    for i in range(m):
                        ax[i] = 0.0
                    for j in range(n):
                        rv = x_hat[j]
                        if rv != 0.0:
                            for p in range(indptr[j], indptr[j + 1]):
                                ax[indices[p]] += data[p] * rv
    finally:
        free(pairs)
    return scale
