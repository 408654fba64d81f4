# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the functions in ``_kernels_py``.

Same signatures, same return layouts.  Only the diagonal of the
``-1``-off-diagonal symmetric tridiagonal matrix is passed in.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport NAN, fabs, fmax, sqrt

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)

ALPHA_TOP, ALPHA, BETA_TOP, BETA_BOT, DET, DMAX, MINPIV = range(7)
N_COLS = 7


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double complex _recip(double complex p) noexcept nogil:
    cdef double d = _abs2(p), sc
    if d == 0.0 or d > 1e300:
        # |p|^2 left the double range: rescale p first
        sc = fmax(fabs(p.real), fabs(p.imag))
        if sc == 0.0:
            return NAN + 1j * NAN
        p = (p.real / sc) + 1j * (p.imag / sc)
        d = _abs2(p) * sc
        return (p.real / d) - 1j * (p.imag / d)
    return (p.real / d) - 1j * (p.imag / d)


cdef inline double _min_abs(double complex[::1] w, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = cabs(w[0])
    for i in range(1, n):
        if cabs(w[i]) < m:
            m = cabs(w[i])
    return m


cdef inline double _finish_minpiv(double min2, double complex[::1] w,
                                  Py_ssize_t n) noexcept nogil:
    # min |w|^2 underflows below ~1e-154; fall back to cabs there
    if min2 < 1e-300:
        return _min_abs(w, n)
    return sqrt(min2)


cdef inline void _continuant(const double complex[::1] base, double shift,
                             double complex *det, double *dmax) noexcept nogil:
    cdef Py_ssize_t j, n = base.shape[0]
    cdef double complex d_prev = 1.0, d = base[0] + shift, tmp
    cdef double a, m = _abs2(d)
    cdef bint huge = False
    if m < 1.0:
        m = 1.0
    for j in range(1, n):
        tmp = d
        d = (base[j] + shift) * d - d_prev
        d_prev = tmp
        a = _abs2(d)
        if a > m:
            m = a
    # squares overflow from |D| ~ 1e154; redo that case with cabs
    if m > 1e300:
        d_prev = 1.0
        d = base[0] + shift
        m = cabs(d)
        for j in range(1, n):
            tmp = d
            d = (base[j] + shift) * d - d_prev
            d_prev = tmp
            a = cabs(d)
            if a > m:
                m = a
        if m < 1.0:
            m = 1.0
        huge = True
    det[0] = d
    dmax[0] = m if huge else sqrt(m)


cdef inline double _factor(const double complex[::1] base, double shift,
                           double complex[::1] w, double complex[::1] rw) noexcept nogil:
    """Pivots ``w`` and their reciprocals ``rw``; returns the smallest ``|w|``."""
    cdef Py_ssize_t i, n = base.shape[0]
    cdef double complex p = base[0] + shift, r
    cdef double a, minpiv = _abs2(p)
    w[0] = p
    for i in range(1, n):
        if p == 0:
            return 0.0
        r = _recip(p)
        rw[i - 1] = r
        p = (base[i] + shift) - r
        w[i] = p
        a = _abs2(p)
        if a < minpiv:
            minpiv = a
    if p == 0:
        return 0.0
    rw[n - 1] = _recip(p)
    return _finish_minpiv(minpiv, w, n)


cdef inline void _corners(const double complex[::1] base, double shift,
                          double complex[::1] w, double complex[::1] rw,
                          double complex[::1] g, double complex[::1] out) noexcept nogil:
    # The recurrences are latency bound, so independent ones share a loop:
    # continuant, pivots and the forward sweep of e_0 (g_i = prod 1/w_j)
    # go forward together, the two backward sweeps go back together.
    cdef Py_ssize_t i, n = base.shape[0]
    cdef double complex s, d, d_prev = 1.0, tmp, p, r, acc, x, y
    cdef double a, m, minpiv, dmax
    cdef bint zero = False
    p = base[0] + shift
    d = p
    m = _abs2(d)
    if m < 1.0:
        m = 1.0
    minpiv = _abs2(p)
    w[0] = p
    if p == 0:
        zero = True
    else:
        r = _recip(p)
        rw[0] = r
        acc = r
        g[0] = acc
        for i in range(1, n):
            s = base[i] + shift
            tmp = d
            d = s * d - d_prev
            d_prev = tmp
            a = _abs2(d)
            if a > m:
                m = a
            p = s - r
            if p == 0:
                zero = True
                break
            w[i] = p
            a = _abs2(p)
            if a < minpiv:
                minpiv = a
            r = _recip(p)
            rw[i] = r
            acc = acc * r
            g[i] = acc
    if zero or m > 1e300:
        _continuant(base, shift, &d, &dmax)
    else:
        dmax = sqrt(m)
    out[4] = d
    out[5] = dmax
    if zero:
        out[6] = 0.0
        for i in range(4):
            out[i] = NAN + 1j * NAN
        return
    out[6] = _finish_minpiv(minpiv, w, n)
    out[3] = g[n - 1]
    x = g[n - 1]
    y = rw[n - 1]
    out[1] = y
    for i in range(n - 2, -1, -1):
        x = g[i] + x * rw[i]
        y = y * rw[i]
    out[0] = x
    out[2] = y


def continuant(diag):
    cdef const double complex[::1] d = np.ascontiguousarray(diag, dtype=complex)
    cdef double complex det
    cdef double dmax
    _continuant(d, 0.0, &det, &dmax)
    return det, dmax


def factor(diag):
    cdef const double complex[::1] d = np.ascontiguousarray(diag, dtype=complex)
    w = np.full(d.shape[0], np.nan, dtype=complex)
    cdef double complex[::1] wv = w
    cdef double complex[::1] rw = np.empty(d.shape[0], dtype=complex)
    cdef double minpiv = _factor(d, 0.0, wv, rw)
    return w, minpiv


def solve_factored(w, rhs):
    cdef const double complex[::1] wv = np.ascontiguousarray(w, dtype=complex)
    cdef const double complex[::1] r = np.ascontiguousarray(rhs, dtype=complex)
    cdef Py_ssize_t i, n = wv.shape[0]
    x = np.empty(n, dtype=complex)
    cdef double complex[::1] xv = x
    cdef double complex acc = 0.0
    for i in range(n):
        acc = (r[i] + acc) / wv[i]
        xv[i] = acc
    for i in range(n - 2, -1, -1):
        xv[i] = xv[i] + xv[i + 1] / wv[i]
    return x


def corners(diag):
    cdef const double complex[::1] d = np.ascontiguousarray(diag, dtype=complex)
    cdef Py_ssize_t n = d.shape[0]
    w = np.empty(n, dtype=complex)
    rw = np.empty(n, dtype=complex)
    g = np.empty(n, dtype=complex)
    out = np.empty(N_COLS, dtype=complex)
    _corners(d, 0.0, w, rw, g, out)
    return (out[0], out[1], out[2], out[3], out[4], out[5].real, out[6].real)


def corners_batch(base, shifts):
    cdef const double complex[::1] b = np.ascontiguousarray(base, dtype=complex)
    cdef const double[::1] s = np.ascontiguousarray(shifts, dtype=float)
    cdef Py_ssize_t k, n = b.shape[0], m = s.shape[0]
    out = np.empty((m, N_COLS), dtype=complex)
    cdef double complex[:, ::1] ov = out
    cdef double complex[::1] w = np.empty(n, dtype=complex)
    cdef double complex[::1] rw = np.empty(n, dtype=complex)
    cdef double complex[::1] g = np.empty(n, dtype=complex)
    with nogil:
        for k in range(m):
            _corners(b, s[k], w, rw, g, ov[k])
    return out
