"""Pure-numpy implementation of the power-table kernels.

Mirrors trilobatto._kernels (the compiled extension).  Powers are built by
cumulative multiplication so both backends perform the same sequence of
IEEE operations on each entry.
"""

import numpy as np

BACKEND = "python"


def _pow_columns(vals, max_exp):
    n = vals.shape[0]
    out = np.ones((n, max_exp + 1))
    if max_exp > 0:
        cols = np.broadcast_to(vals[:, None], (n, max_exp))
        np.multiply.accumulate(cols, axis=1, out=out[:, 1:])
    return out


def power_table(xs, ys, ii, jj):
    """P[q, k] = xs[k]**ii[q] * ys[k]**jj[q]."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    xp = _pow_columns(xs, int(ii.max(initial=0)))
    yp = _pow_columns(ys, int(jj.max(initial=0)))
    return (xp[:, ii] * yp[:, jj]).T.copy()


def power_table_grads(xs, ys, ii, jj):
    """Power table plus its derivatives with respect to each coordinate.

    Returns (P, Px, Py) with Px[q, k] = d/dx_k of P[q, k], Py analogous.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    xp = _pow_columns(xs, int(ii.max(initial=0)))
    yp = _pow_columns(ys, int(jj.max(initial=0)))
    xi = xp[:, ii]
    yj = yp[:, jj]
    p = xi * yj

    iif = ii.astype(np.float64)
    jjf = jj.astype(np.float64)
    px = (iif * xp[:, np.maximum(ii - 1, 0)]) * yj
    px[:, ii == 0] = 0.0
    py = (jjf * yp[:, np.maximum(jj - 1, 0)]) * xi
    py[:, jj == 0] = 0.0
    return p.T.copy(), px.T.copy(), py.T.copy()
