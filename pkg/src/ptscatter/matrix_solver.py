"""Scattering amplitudes from the corners of the inverse of T.

The difference equation restricted to ``|k| <= M-1``, with the free-wave
values at ``k = +-M`` moved to the right-hand side, is a ``(2M-1)``-square
symmetric tridiagonal system ``T x = (xi_{-M}, 0, ..., 0, xi_M)``.  Only the
four corners of ``R = T^-1`` enter the amplitudes: with
``alpha = R[n-1, n-1]`` and ``beta = R[0, n-1] = 1/det T``,

    C = 2i beta e^{-2iM phi} sin(phi) / (beta^2 - (e^{-i phi} - alpha*)(e^{-i phi} - alpha))
    B = -e^{-2iM phi} + (C / beta)(e^{-i phi} - alpha)
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from . import kernels
from . import matching_solver
from .errors import (DeterminantOverflow, NearSingular, PersymmetryViolation,
                     ScatteringError, SpectralSingularity, StepMismatch)
from .lattice import LatticePotential, PhaseEnergy
from .solution import CornerCoefficients, ScatteringSolution, Side

SINGULAR_TOL = 1e-10
DENOM_TOL = 1e-10
PIVOT_TOL = 1e-12
PERSYM_TOL = 1e-8
OVERFLOW_LIMIT = 1e300
# cancellation factor (|beta^2| + |t2|) / (|den| sin phi) above which the
# corner formulas lose digits and the matching solver answers instead
COND_LIMIT = 30.0


@dataclass(frozen=True, eq=False)
class TMatrix:
    """Diagonal ``S_{-(M-1)} .. S_{M-1}`` of T; off-diagonals are ``-1``."""

    diag: np.ndarray
    phi: PhaseEnergy

    @property
    def n(self) -> int:
        return self.diag.size

    @property
    def M(self) -> int:
        return (self.diag.size + 1) // 2

    def dense(self) -> np.ndarray:
        n = self.n
        T = np.diag(self.diag.astype(complex))
        idx = np.arange(n - 1)
        T[idx, idx + 1] = -1.0
        T[idx + 1, idx] = -1.0
        return T


def build_tmatrix(pot: LatticePotential, phi: PhaseEnergy) -> TMatrix:
    if not math.isclose(pot.h, phi.h, rel_tol=1e-12):
        raise StepMismatch(f"potential has h={pot.h} but phase has h={phi.h}")
    right = phi.two_cos + pot.Z.astype(complex)
    right[1:] += 1j * pot.Y
    diag = np.concatenate([np.conj(right[:0:-1]), right])
    diag.setflags(write=False)
    return TMatrix(diag, phi)


def _dense_corners(T: TMatrix):
    lu = scipy.linalg.lu_factor(T.dense(), check_finite=False)
    n = T.n
    e = np.zeros((n, 2), dtype=complex)
    e[0, 0] = 1.0
    e[n - 1, 1] = 1.0
    X = scipy.linalg.lu_solve(lu, e, check_finite=False)
    return X[0, 0], X[n - 1, 1], X[0, 1], X[n - 1, 0]


def _pivot_floor(diag, pivot_tol):
    return pivot_tol * (1.0 + float(np.max(np.abs(diag))))


def corner_inverse(T: TMatrix, singular_tol=SINGULAR_TOL, pivot_tol=PIVOT_TOL,
                   persym_tol=PERSYM_TOL) -> CornerCoefficients:
    """Corner entries of ``T^-1`` and ``det T``.

    Two tridiagonal solves (first and last unit vectors) give the corners;
    an elimination pivot below ``pivot_tol * (1 + max|S|)`` reroutes both
    solves through a dense partial-pivoting LU.  ``det T`` comes from the
    continuant recurrence.

    Raises
    ------
    NearSingular
        ``|det T| <= singular_tol * max_k |D_k|``.
    DeterminantOverflow
        A continuant exceeded 1e300 in magnitude.
    PersymmetryViolation
        The computed corners break ``R[0,0] = conj(R[n-1,n-1])`` or
        ``R[0,n-1] = R[n-1,0]`` by more than ``persym_tol``.
    """
    at, a, bt, bb, det, dmax, minpiv = kernels.corners(T.diag)
    return _finish_corners(T.diag, T.phi.phi, at, a, bt, bb, det, dmax, minpiv,
                           singular_tol, pivot_tol, persym_tol,
                           dense=lambda: _dense_corners(T))


def _finish_corners(diag, phi, at, a, bt, bb, det, dmax, minpiv,
                    singular_tol, pivot_tol, persym_tol, dense):
    det = complex(det)
    dmax = float(np.real(dmax))
    if not (math.isfinite(dmax) and dmax <= OVERFLOW_LIMIT):
        raise DeterminantOverflow(f"continuant magnitude {dmax:.3e} exceeds {OVERFLOW_LIMIT:g}")
    if abs(det) <= singular_tol * dmax:
        raise NearSingular(f"det T = {det:.3e} vanishes relative to {dmax:.3e}", det=det, phi=phi)
    method = "thomas"
    if not float(np.real(minpiv)) > _pivot_floor(diag, pivot_tol):
        at, a, bt, bb = dense()
        method = "lu"
    corners = CornerCoefficients(alpha=complex(a), beta=0.5 * complex(bt + bb), detT=det,
                                 alpha_top=complex(at), beta_top=complex(bt),
                                 beta_bot=complex(bb), method=method)
    worst = max(corners.persymmetry_residual, corners.antidiagonal_residual)
    if not worst <= persym_tol:
        raise PersymmetryViolation(
            f"corner structure broken (relative residual {worst:.3e})")
    return corners


def _denominator(alpha, beta, phi):
    e = cmath.exp(-1j * phi)
    t1 = beta * beta
    t2 = (e - alpha.conjugate()) * (e - alpha)
    return t1 - t2, abs(t1) + abs(t2)


def amplitudes_from_corners(corners: CornerCoefficients, phi: PhaseEnergy, M: int,
                            denom_tol=DENOM_TOL):
    """``(B, C)`` for unit incident amplitude from ``alpha``, ``beta``."""
    p = phi.phi
    a, b = corners.alpha, corners.beta
    den, scale = _denominator(a, b, p)
    if abs(den) <= denom_tol * scale:
        raise SpectralSingularity(
            f"transmission denominator vanishes at phi={p!r} ({abs(den):.3e})", phi=p)
    phase = cmath.exp(-2j * M * p)
    C = 2j * b * phase * math.sin(p) / den
    B = -phase + C / b * (cmath.exp(-1j * p) - a)
    return B, C


def solve_tridiagonal(diag, rhs, pivot_tol=PIVOT_TOL):
    """Solve ``T x = rhs``; Thomas fast path, dense LU when a pivot is tiny."""
    w, minpiv = kernels.factor(diag)
    if minpiv > _pivot_floor(diag, pivot_tol):
        return kernels.solve_factored(w, rhs)
    n = len(diag)
    T = np.diag(np.asarray(diag, dtype=complex))
    idx = np.arange(n - 1)
    T[idx, idx + 1] = T[idx + 1, idx] = -1.0
    return scipy.linalg.solve(T, np.asarray(rhs, dtype=complex), check_finite=False)


def _interior(T: TMatrix, B, C, pivot_tol):
    M, p = T.M, T.phi.phi
    if M == 1:
        return np.empty(0, dtype=complex)
    rhs = np.zeros(T.n, dtype=complex)
    rhs[0] = cmath.exp(-1j * M * p) + B * cmath.exp(1j * M * p)
    rhs[-1] = C * cmath.exp(1j * M * p)
    return solve_tridiagonal(T.diag, rhs, pivot_tol)[1:-1].copy()


def _matching_fallback(pot, phi, T, denom_tol):
    sol = matching_solver.solve_full_matching(pot, phi, Side.LEFT, denom_tol=denom_tol)
    det, dmax = kernels.continuant(T.diag)
    det = complex(det) if math.isfinite(float(np.real(dmax))) else None
    return replace(sol.as_fallback(), detT=det)


def solve_left(pot: LatticePotential, phi: PhaseEnergy, singular_tol=SINGULAR_TOL,
               denom_tol=DENOM_TOL, pivot_tol=PIVOT_TOL, cond_limit=COND_LIMIT,
               fallback=True) -> ScatteringSolution:
    """Left-incidence amplitudes and interior wavefunction.

    When ``det T`` is numerically zero (or overflows) the corner route is
    undefined and, with ``fallback=True``, the matching solver answers
    instead; the returned solution then has ``fallback=True``.  The same
    happens when the transmission denominator cancels by more than
    ``cond_limit * sin(phi)`` without vanishing, which occurs next to zeros
    of ``det T`` and near the band edges.  ``cond_limit=None`` disables
    that guard.
    """
    T = build_tmatrix(pot, phi)
    try:
        corners = corner_inverse(T, singular_tol, pivot_tol)
    except (NearSingular, DeterminantOverflow):
        if not fallback:
            raise
        return _matching_fallback(pot, phi, T, denom_tol)
    B, C = amplitudes_from_corners(corners, phi, pot.M, denom_tol)
    if fallback and cond_limit is not None:
        den, scale = _denominator(corners.alpha, corners.beta, phi.phi)
        if scale > cond_limit * abs(den) * math.sin(phi.phi):
            return _matching_fallback(pot, phi, T, denom_tol)
    psi = _interior(T, B, C, pivot_tol)
    return ScatteringSolution(B=B, C=C, psi_interior=psi, side=Side.LEFT, phi=phi,
                              M=pot.M, corners=corners, detT=corners.detT)


def solve_right(pot: LatticePotential, phi: PhaseEnergy, **kwargs) -> ScatteringSolution:
    """Right incidence, as left incidence on the mirrored (conjugated) potential."""
    sol = solve_left(pot.reflected(), phi, **kwargs).mirrored()
    # keep the corners of the original T rather than of its mirror image
    corners = sol.corners.conjugated() if sol.corners is not None else None
    detT = sol.detT.conjugate() if sol.detT is not None else None
    return replace(sol, corners=corners, detT=detT)


def solve(pot: LatticePotential, phi: PhaseEnergy, side="left", **kwargs) -> ScatteringSolution:
    side = Side.parse(side)
    if side is Side.LEFT:
        return solve_left(pot, phi, **kwargs)
    return solve_right(pot, phi, **kwargs)


STATUS_OK = "ok"
STATUS_SINGULAR = "spectral_singularity"
STATUS_FALLBACK = "fallback_matching"


@dataclass(frozen=True, eq=False)
class Sweep:
    """Column arrays of a phase sweep for one incidence side."""

    phi: np.ndarray
    B: np.ndarray
    C: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    detT: np.ndarray
    status: np.ndarray
    side: Side


def sweep(pot: LatticePotential, phis, side="left", singular_tol=SINGULAR_TOL,
          denom_tol=DENOM_TOL, pivot_tol=PIVOT_TOL, cond_limit=COND_LIMIT) -> Sweep:
    """Amplitudes over many phases with one batched kernel call.

    Rows the batch cannot settle (tiny pivots, near-singular ``T``, overflow)
    are re-solved one at a time through :func:`solve`.  Spectral
    singularities are recorded in ``status`` and leave ``nan`` amplitudes.
    """
    side = Side.parse(side)
    phis = np.asarray(phis, dtype=float).reshape(-1)
    work = pot if side is Side.LEFT else pot.reflected()
    M = pot.M
    base = np.concatenate([np.conj(_right_half(work)[:0:-1]), _right_half(work)])
    raw = kernels.corners_batch(base, 2.0 * np.cos(phis))
    at, a = raw[:, kernels.ALPHA_TOP], raw[:, kernels.ALPHA]
    bt, bb = raw[:, kernels.BETA_TOP], raw[:, kernels.BETA_BOT]
    det = raw[:, kernels.DET]
    dmax = raw[:, kernels.DMAX].real
    minpiv = raw[:, kernels.MINPIV].real

    limit = (1.0 / denom_tol if cond_limit is None
             else cond_limit * np.sin(phis))
    absS = np.abs(base[None, :] + 2.0 * np.cos(phis)[:, None]).max(axis=1)
    with np.errstate(all="ignore"):
        beta = 0.5 * (bt + bb)
        e = np.exp(-1j * phis)
        t1 = beta * beta
        t2 = (e - np.conj(a)) * (e - a)
        den = t1 - t2
        phase = np.exp(-2j * M * phis)
        C = 2j * beta * phase * np.sin(phis) / den
        B = -phase + C / beta * (e - a)
        tiny = np.finfo(float).tiny
        scale = np.maximum.reduce([np.abs(a), np.abs(at), np.abs(bt), np.abs(bb),
                                   np.full(a.shape, tiny)])
        persym = np.maximum(np.abs(at - np.conj(a)), np.abs(bt - bb)) / scale
    fast = ((dmax <= OVERFLOW_LIMIT) & (np.abs(det) > singular_tol * dmax)
            & (minpiv > pivot_tol * (1.0 + absS)) & (persym <= PERSYM_TOL)
            & (np.abs(den) * limit > np.abs(t1) + np.abs(t2))
            & np.isfinite(B) & np.isfinite(C))

    status = np.full(phis.size, STATUS_OK, dtype=object)
    B, C, detT = B.copy(), C.copy(), det.copy()
    # report the corners of the original T; the mirrored T is its conjugate
    alpha = np.conj(a) if side is Side.RIGHT else a.copy()
    for i in np.flatnonzero(~fast):
        ph = PhaseEnergy(float(phis[i]), pot.h)
        try:
            sol = solve(pot, ph, side, singular_tol=singular_tol, denom_tol=denom_tol,
                        pivot_tol=pivot_tol, cond_limit=cond_limit)
        except SpectralSingularity:
            # the amplitudes have a pole; the corners of T are still finite
            B[i] = C[i] = complex(np.nan, np.nan)
            status[i] = STATUS_SINGULAR
            try:
                c = corner_inverse(build_tmatrix(pot, ph), singular_tol, pivot_tol)
                alpha[i], beta[i], detT[i] = c.alpha, c.beta, c.detT
            except ScatteringError:
                alpha[i] = beta[i] = complex(np.nan, np.nan)
            continue
        B[i], C[i] = sol.B, sol.C
        if sol.fallback:
            alpha[i] = beta[i] = complex(np.nan, np.nan)
            detT[i] = sol.detT if sol.detT is not None else complex(np.nan, np.nan)
            status[i] = STATUS_FALLBACK
        else:
            alpha[i] = sol.corners.alpha
            beta[i] = sol.corners.beta
            detT[i] = sol.corners.detT
    return Sweep(phi=phis, B=B, C=C, alpha=alpha, beta=beta, detT=detT,
                 status=status, side=side)


def _right_half(pot: LatticePotential) -> np.ndarray:
    right = pot.Z.astype(complex)
    right[1:] += 1j * pot.Y
    return right
