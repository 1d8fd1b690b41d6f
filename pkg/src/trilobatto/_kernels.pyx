# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled power-table kernels: the inner loop of the moment-equation
solver.  Semantics match trilobatto._kernels_py."""

import numpy as np

BACKEND = "cython"


cdef void _fill_pow(double[:, ::1] out, double[:] vals, Py_ssize_t max_exp) noexcept:
    cdef Py_ssize_t k, e
    cdef double v
    for k in range(vals.shape[0]):
        out[k, 0] = 1.0
        v = vals[k]
        for e in range(1, max_exp + 1):
            out[k, e] = out[k, e - 1] * v


def power_table(xs, ys, ii, jj):
    """P[q, k] = xs[k]**ii[q] * ys[k]**jj[q]."""
    cdef double[:] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef long[:] iv = np.ascontiguousarray(ii, dtype=np.int64)
    cdef long[:] jv = np.ascontiguousarray(jj, dtype=np.int64)
    cdef Py_ssize_t nk = xv.shape[0], nq = iv.shape[0]
    cdef Py_ssize_t imax = 0, jmax = 0, k, q
    for q in range(nq):
        if iv[q] > imax:
            imax = iv[q]
        if jv[q] > jmax:
            jmax = jv[q]
    xp_arr = np.empty((nk, imax + 1))
    yp_arr = np.empty((nk, jmax + 1))
    cdef double[:, ::1] xp = xp_arr
    cdef double[:, ::1] yp = yp_arr
    _fill_pow(xp, xv, imax)
    _fill_pow(yp, yv, jmax)

    p_arr = np.empty((nq, nk))
    cdef double[:, ::1] p = p_arr
    for q in range(nq):
        for k in range(nk):
            p[q, k] = xp[k, iv[q]] * yp[k, jv[q]]
    return p_arr


def power_table_grads(xs, ys, ii, jj):
    """Power table plus its derivatives with respect to each coordinate.

    Returns (P, Px, Py) with Px[q, k] = d/dx_k of P[q, k], Py analogous.
    """
    cdef double[:] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef long[:] iv = np.ascontiguousarray(ii, dtype=np.int64)
    cdef long[:] jv = np.ascontiguousarray(jj, dtype=np.int64)
    cdef Py_ssize_t nk = xv.shape[0], nq = iv.shape[0]
    cdef Py_ssize_t imax = 0, jmax = 0, k, q
    cdef long iq, jq
    cdef double xi, yj
    for q in range(nq):
        if iv[q] > imax:
            imax = iv[q]
        if jv[q] > jmax:
            jmax = jv[q]
    xp_arr = np.empty((nk, imax + 1))
    yp_arr = np.empty((nk, jmax + 1))
    cdef double[:, ::1] xp = xp_arr
    cdef double[:, ::1] yp = yp_arr
    _fill_pow(xp, xv, imax)
    _fill_pow(yp, yv, jmax)

    p_arr = np.empty((nq, nk))
    px_arr = np.empty((nq, nk))
    py_arr = np.empty((nq, nk))
    cdef double[:, ::1] p = p_arr
    cdef double[:, ::1] px = px_arr
    cdef double[:, ::1] py = py_arr
    for q in range(nq):
        iq = iv[q]
        jq = jv[q]
        for k in range(nk):
            xi = xp[k, iq]
            yj = yp[k, jq]
            p[q, k] = xi * yj
            px[q, k] = 0.0 if iq == 0 else ((<double> iq) * xp[k, iq - 1]) * yj
            py[q, k] = 0.0 if jq == 0 else ((<double> jq) * yp[k, jq - 1]) * xi
    return p_arr, px_arr, py_arr
