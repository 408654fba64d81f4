"""Matching method: solve the difference equation directly for B, C, psi.

The free-wave boundary values are substituted into the difference equation
at every site ``|k| <= M-1`` and the resulting square system in the unknowns
``(B, psi_{-(M-2)}, ..., psi_{M-2}, C)`` is solved by tridiagonal LU.  This is an
independent check on :mod:`ptscatter.matrix_solver` and its fallback when
``det T`` vanishes.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, LengthMismatch, SpectralSingularity
from .lattice import LatticePotential, PhaseEnergy
from .solution import ScatteringSolution, Side, site_diagonal

DENOM_TOL = 1e-10
# reciprocal condition number below which the matching system is a pole
RCOND_TOL = 1e-14


def closed_form_M1(Z0, phi: PhaseEnergy, denom_tol=DENOM_TOL):
    """Single-site scatterer: ``C = 2i sin(phi) / (2i sin(phi) - Z0)``, ``B = C - 1``."""
    Z0 = float(Z0)
    w = 2j * math.sin(phi.phi)
    den = w - Z0
    if abs(den) <= denom_tol:
        raise SpectralSingularity(f"2i sin(phi) - Z0 vanishes at phi={phi.phi!r}", phi=phi.phi)
    return Z0 / den, w / den


def closed_form_M2(pot: LatticePotential, phi: PhaseEnergy, denom_tol=DENOM_TOL):
    """Three-site scatterer reduced to a 2x2 problem in ``(C, psi_0)``.

    With ``xi0m = 1 + B`` and ``xi0p = C`` the free continuation of the
    outer waves to the origin, the outer equations read
    ``psi_0 = xi0m + chi0m = xi0p + chi0p`` where ``chi0m = V_{-1} psi_{-1}``
    and ``chi0p = V_1 psi_1``.  ``B`` is eliminated through the central
    equation ``-psi_{-1} + S_0 psi_0 - psi_1 = 0``.

    Returns ``(B, C, psi_0)``.
    """
    if pot.M != 2:
        raise DimensionMismatch(f"closed_form_M2 needs M=2, got M={pot.M}")
    p = phi.phi
    e = cmath.exp(1j * p)
    Vm = complex(pot.Z[1], -pot.Y[0])
    Vp = complex(pot.Z[1], pot.Y[0])
    S0 = phi.two_cos + pot.Z[0]
    # psi_{-1} = 1/e + B e,  psi_1 = C e;  central equation gives
    # B = (S0 psi_0 - C e - 1/e) / e
    # xi0p + chi0p = psi_0          ->  C (1 + Vp e) - psi_0 = 0
    # xi0m + chi0m = psi_0, with B substituted:
    #   (1 + Vm/e) + (1 + Vm e)(S0 psi_0 - C e - 1/e)/e = psi_0
    g = 1.0 + Vm * e
    a11, a12 = 1.0 + Vp * e, -1.0
    a21, a22 = g, 1.0 - g * S0 / e
    r2 = 1.0 + Vm / e - g / (e * e)
    det = a11 * a22 - a12 * a21
    if abs(det) <= denom_tol * (abs(a11 * a22) + abs(a12 * a21)):
        raise SpectralSingularity(f"M=2 matching determinant vanishes at phi={p!r}", phi=p)
    C = -a12 * r2 / det
    psi0 = a11 * r2 / det
    B = (S0 * psi0 - C * e - 1.0 / e) / e
    return B, C, psi0


@dataclass(frozen=True, eq=False)
class MatchingSystem:
    """Dense matching system ``matrix @ unknowns = rhs``.

    For ``M >= 2`` the unknowns are ``(B, psi_{-(M-2)}, ..., psi_{M-2}, C)``
    and the rows are the difference equation at ``k = -(M-1) .. M-1``.  For
    ``M = 1`` the lone site is shared by both outer waves, so the unknowns
    are ``(B, C)`` and the second row is the matching condition ``1 + B = C``.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    M: int

    @property
    def dim(self) -> int:
        return self.rhs.size


def assemble(pot: LatticePotential, phi: PhaseEnergy) -> MatchingSystem:
    """Left-incidence matching system for ``pot`` at ``phi``."""
    M = pot.M
    p = phi.phi
    S = site_diagonal(pot, phi, M)  # sites -M .. M

    if M == 1:
        e = cmath.exp(1j * p)
        A = np.array([[-e, S[1] - e],
                      [1.0, -1.0]], dtype=complex)
        rhs = np.array([1.0 / e, -1.0], dtype=complex)
        return MatchingSystem(A, rhs, M)

    n = 2 * M - 1
    A = np.zeros((n, n), dtype=complex)
    rhs = np.zeros(n, dtype=complex)
    col_B, col_C = 0, n - 1
    for row, k in enumerate(range(-(M - 1), M)):
        for j, coef in ((k - 1, -1.0), (k, S[k + M]), (k + 1, -1.0)):
            if j <= -(M - 1):
                # psi_j = e^{ij phi} + B e^{-ij phi}
                A[row, col_B] += coef * cmath.exp(-1j * j * p)
                rhs[row] -= coef * cmath.exp(1j * j * p)
            elif j >= M - 1:
                A[row, col_C] += coef * cmath.exp(1j * j * p)
            else:
                A[row, j + (M - 2) + 1] += coef
    return MatchingSystem(A, rhs, M)


def _raise_singular(phi, rcond):
    raise SpectralSingularity(
        f"matching system singular at phi={phi.phi!r} (rcond={rcond:.3e})", phi=phi.phi)


def _solve_dense(system, phi, rcond_tol):
    # gttrf in scipy does not accept n < 3
    lu, piv = scipy.linalg.lu_factor(system.matrix, check_finite=False)
    rcond = 0.0
    if np.all(np.isfinite(lu)) and np.all(np.diag(lu) != 0):
        gecon, = scipy.linalg.get_lapack_funcs(("gecon",), (lu,))
        rcond, _ = gecon(lu, np.linalg.norm(system.matrix, 1), norm="1")
    if not rcond > rcond_tol:
        _raise_singular(phi, rcond)
    return scipy.linalg.lu_solve((lu, piv), system.rhs, check_finite=False)


def solve_system(system: MatchingSystem, phi: PhaseEnergy, rcond_tol=RCOND_TOL):
    """Solve by tridiagonal LU with partial pivoting.

    In the ``(B, psi, C)`` ordering the ``B`` and ``C`` columns take the
    places of ``psi_{-(M-1)}`` and ``psi_{M-1}``, so the matrix stays
    tridiagonal.
    """
    A = system.matrix
    if A.shape[0] < 3:
        return _solve_dense(system, phi, rcond_tol)
    dl, d, du = np.diag(A, -1).copy(), np.diag(A).copy(), np.diag(A, 1).copy()
    gttrf, gtcon, gttrs = scipy.linalg.lapack.get_lapack_funcs(
        ("gttrf", "gtcon", "gttrs"), (A,))
    dl, d, du, du2, ipiv, info = gttrf(dl, d, du)
    rcond = 0.0
    if info == 0 and np.all(np.isfinite(d)):
        anorm = float(np.abs(A).sum(axis=0).max())
        rcond, _ = gtcon(dl, d, du, du2, ipiv, anorm, norm="1")
    if not rcond > rcond_tol:
        _raise_singular(phi, rcond)
    x, _ = gttrs(dl, d, du, du2, ipiv, system.rhs)
    return x


def solve_full_matching(pot: LatticePotential, phi: PhaseEnergy, side="left",
                        denom_tol=DENOM_TOL, rcond_tol=RCOND_TOL) -> ScatteringSolution:
    """Amplitudes and interior wavefunction by the matching method.

    Right incidence is left incidence on the mirrored potential ``Y -> -Y``.
    ``denom_tol`` is accepted for signature parity with the matrix solver;
    singularity here is judged by the reciprocal condition number.
    """
    side = Side.parse(side)
    work = pot if side is Side.LEFT else pot.reflected()
    x = solve_system(assemble(work, phi), phi, rcond_tol)
    B, C = complex(x[0]), complex(x[-1])
    psi = x[1:-1].copy() if pot.M > 1 else np.empty(0, dtype=complex)
    sol = ScatteringSolution(B=B, C=C, psi_interior=psi, side=Side.LEFT, phi=phi,
                             M=pot.M, method="matching")
    return sol.mirrored() if side is Side.RIGHT else sol


def discrete_wronskian(psiA, psiB) -> np.ndarray:
    """``W_m = a_m b_{m+1} - a_{m+1} b_m`` over consecutive sites."""
    a = np.asarray(psiA, dtype=complex)
    b = np.asarray(psiB, dtype=complex)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"wavefunctions differ in shape: {a.shape} vs {b.shape}")
    if a.size < 2:
        raise LengthMismatch("need at least two sites")
    return a[:-1] * b[1:] - a[1:] * b[:-1]
