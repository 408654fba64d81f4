"""Reference kernels in plain Python/numpy.

Every matrix handled here is symmetric tridiagonal with constant ``-1`` off
the diagonal, so only the diagonal is passed around.  ``_ckernels.pyx``
mirrors these functions one for one; keep the two in step.
"""
import numpy as np

# column layout of corners_batch output
ALPHA_TOP, ALPHA, BETA_TOP, BETA_BOT, DET, DMAX, MINPIV = range(7)
N_COLS = 7


def continuant(diag):
    """Determinant by ``D_j = S_j D_{j-1} - D_{j-2}``; also ``max_j |D_j|``."""
    d_prev = 1.0 + 0.0j
    d = complex(diag[0])
    dmax = max(1.0, abs(d))
    for s in diag[1:]:
        d, d_prev = s * d - d_prev, d
        a = abs(d)
        if a > dmax:
            dmax = a
    return d, dmax


def factor(diag):
    """Pivots of unpivoted Gaussian elimination, and the smallest modulus."""
    n = len(diag)
    w = np.empty(n, dtype=complex)
    p = complex(diag[0])
    w[0] = p
    minpiv = abs(p)
    for i in range(1, n):
        if p == 0:
            w[i:] = np.nan
            return w, 0.0
        p = diag[i] - 1.0 / p
        w[i] = p
        a = abs(p)
        if a < minpiv:
            minpiv = a
    return w, minpiv


def solve_factored(w, rhs):
    """Solve ``T x = rhs`` given the pivots from :func:`factor`."""
    n = len(w)
    g = np.empty(n, dtype=complex)
    acc = 0.0j
    for i in range(n):
        acc = (rhs[i] + acc) / w[i]
        g[i] = acc
    x = g
    for i in range(n - 2, -1, -1):
        x[i] = g[i] + x[i + 1] / w[i]
    return x


def corners(diag):
    """Corner entries of ``T^-1`` from the first- and last-column solves.

    Returns ``(R[0,0], R[n-1,n-1], R[0,n-1], R[n-1,0], det, dmax, minpiv)``.
    The corner solves are only meaningful when ``minpiv`` is not tiny.
    """
    n = len(diag)
    det, dmax = continuant(diag)
    w, minpiv = factor(diag)
    if minpiv == 0.0:
        nan = complex(np.nan, np.nan)
        return nan, nan, nan, nan, det, dmax, 0.0
    # first unit vector: forward pass g_i = g_{i-1} / w_i, then back-substitute
    g = np.empty(n, dtype=complex)
    acc = 1.0 / w[0]
    g[0] = acc
    for i in range(1, n):
        acc = acc / w[i]
        g[i] = acc
    beta_bot = g[n - 1]
    x = g[n - 1]
    for i in range(n - 2, -1, -1):
        x = g[i] + x / w[i]
    alpha_top = x
    # last unit vector: forward pass is zero until the final row
    x = 1.0 / w[n - 1]
    alpha = x
    for i in range(n - 2, -1, -1):
        x = x / w[i]
    beta_top = x
    return alpha_top, alpha, beta_top, beta_bot, det, dmax, minpiv


def corners_batch(base, shifts):
    """:func:`corners` for ``diag = base + shift`` over an array of shifts.

    Vectorised over the shift axis; returns a complex ``(len(shifts), 7)``
    array with columns ``ALPHA_TOP .. MINPIV``.
    """
    base = np.asarray(base, dtype=complex)
    shifts = np.asarray(shifts, dtype=float)
    n = base.size
    m = shifts.size
    out = np.empty((m, N_COLS), dtype=complex)
    chunk = max(1, min(m, (1 << 20) // n))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for lo in range(0, m, chunk):
            s = shifts[lo:lo + chunk]
            k = s.size
            # continuant
            d_prev = np.ones(k, dtype=complex)
            d = base[0] + s
            dmax = np.maximum(1.0, np.abs(d))
            for j in range(1, n):
                d, d_prev = (base[j] + s) * d - d_prev, d
                np.maximum(dmax, np.abs(d), out=dmax)
            # pivots
            w = np.empty((n, k), dtype=complex)
            w[0] = base[0] + s
            for j in range(1, n):
                w[j] = (base[j] + s) - 1.0 / w[j - 1]
            # a zero pivot poisons the rest of the column with nan
            minpiv = np.nan_to_num(np.abs(w).min(axis=0), nan=0.0)
            inv_w = 1.0 / w
            g = np.cumprod(inv_w, axis=0)
            beta_bot = g[n - 1]
            x = g[n - 1].copy()
            for j in range(n - 2, -1, -1):
                x = g[j] + x * inv_w[j]
            alpha_top = x
            alpha = inv_w[n - 1]
            beta_top = np.prod(inv_w[::-1], axis=0)
            bad = minpiv == 0.0
            for col, val in ((ALPHA_TOP, alpha_top), (ALPHA, alpha),
                             (BETA_TOP, beta_top), (BETA_BOT, beta_bot)):
                val = np.where(bad, np.nan + 1j * np.nan, val)
                out[lo:lo + k, col] = val
            out[lo:lo + k, DET] = d
            out[lo:lo + k, DMAX] = dmax
            out[lo:lo + k, MINPIV] = minpiv
    return out
