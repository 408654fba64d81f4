"""Reference computations that share no code with the package.

Each oracle is deliberately naive: dense inverses, transfer propagation,
symbolic determinants.  They are only good for small systems.
"""
import cmath
import math

import numpy as np
import sympy as sp


def site_potential(Z, Y, k):
    """``V_k`` with ``V_{-k} = conj(V_k)`` and ``Y_0 = 0``."""
    a = abs(k)
    if a >= len(Z):
        return 0.0
    if a == 0:
        return complex(Z[0])
    return complex(Z[a], Y[a - 1] if k > 0 else -Y[a - 1])


def dense_T(Z, Y, phi):
    M = len(Z)
    n = 2 * M - 1
    T = np.zeros((n, n), dtype=complex)
    for i, k in enumerate(range(-(M - 1), M)):
        T[i, i] = 2.0 * math.cos(phi) + site_potential(Z, Y, k)
        if i + 1 < n:
            T[i, i + 1] = T[i + 1, i] = -1.0
    return T


def dense_corners(Z, Y, phi):
    """``(R[0,0], R[n-1,n-1], R[0,n-1], R[n-1,0], det T)`` by dense inversion."""
    T = dense_T(Z, Y, phi)
    R = np.linalg.inv(T)
    return R[0, 0], R[-1, -1], R[0, -1], R[-1, 0], np.linalg.det(T)


def transfer_amplitudes(Z, Y, phi):
    """Left-incidence ``(B, C)`` by propagating a pure outgoing wave leftwards.

    Start from ``psi_m = e^{i m phi}`` at ``m = M-1, M``, run the difference
    equation down to ``m = -M`` and split the result into incoming and
    reflected waves.  Unstable for long strong barriers; fine for small M.
    """
    M = len(Z)
    e = cmath.exp(1j * phi)
    psi = {M: e ** M, M - 1: e ** (M - 1)}
    for k in range(M - 1, -M, -1):
        S = 2.0 * math.cos(phi) + site_potential(Z, Y, k)
        psi[k - 1] = S * psi[k] - psi[k + 1]
    # psi_j = A e^{i j phi} + Bp e^{-i j phi} at j = -M, -(M-1)
    j0, j1 = -M, -(M - 1)
    mat = np.array([[e ** j0, e ** -j0], [e ** j1, e ** -j1]])
    A, Bp = np.linalg.solve(mat, [psi[j0], psi[j1]])
    return Bp / A, 1.0 / A


def symbols(M):
    Z = sp.symbols(f"Z0:{M}")
    Y = sp.symbols(f"Y1:{M}") if M > 1 else ()
    return Z, Y


def symbolic_T(M):
    """T at ``phi = pi/2`` (so ``2 cos phi = 0``) with symbolic couplings."""
    Z, Y = symbols(M)
    n = 2 * M - 1
    T = sp.zeros(n, n)
    for i, k in enumerate(range(-(M - 1), M)):
        a = abs(k)
        T[i, i] = Z[a] + (sp.sign(k) * sp.I * Y[a - 1] if a else 0)
        if i + 1 < n:
            T[i, i + 1] = T[i + 1, i] = -1
    return T


def symbolic_det_gamma(M):
    """Expanded ``det T`` and ``gamma`` (cofactor of the last diagonal entry)."""
    T = symbolic_T(M)
    det = sp.expand(T.det(method="berkowitz"))
    n = T.shape[0]
    gamma = sp.expand(T[: n - 1, : n - 1].det(method="berkowitz")) if n > 1 else sp.Integer(1)
    return det, gamma


def terms_to_sympy(terms, M):
    Z, Y = symbols(M)
    names = {str(s): s for s in (*Z, *Y)}
    out = sp.Integer(0)
    for c, exps in terms:
        t = sp.Integer(c)
        for name, e in exps.items():
            t *= names[name] ** e
        out += t
    return sp.expand(out)


def real_imag_parts(expr, M):
    """``(Re, Im)`` of a polynomial with complex coefficients in real variables."""
    Z, Y = symbols(M)
    gens = (*Z, *Y)
    re_part, im_part = sp.Integer(0), sp.Integer(0)
    for m, c in sp.Poly(expr, *gens).terms():
        mono = sp.Mul(*[g ** e for g, e in zip(gens, m)])
        re_part += sp.re(c) * mono
        im_part += sp.im(c) * mono
    return sp.expand(re_part), sp.expand(im_part)
