"""Scattering solution container shared by both solvers."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .lattice import LatticePotential, PhaseEnergy


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def parse(cls, value) -> "Side":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class CornerCoefficients:
    """Corner entries of ``R = T^-1`` plus ``det T``.

    ``alpha`` is ``R[n-1, n-1]``; ``R[0, 0]`` equals ``conj(alpha)`` and both
    anti-diagonal corners equal ``beta = 1/det T``.  The two diagnostic
    residuals record how well the computed corners honour that structure.
    """

    alpha: complex
    beta: complex
    detT: complex
    alpha_top: complex
    beta_top: complex
    beta_bot: complex
    method: str = "thomas"

    @property
    def _corner_scale(self) -> float:
        # one scale for all four corners: alpha alone can pass through zero
        return max(abs(self.alpha), abs(self.alpha_top), abs(self.beta_top),
                   abs(self.beta_bot), np.finfo(float).tiny)

    @property
    def persymmetry_residual(self) -> float:
        return abs(self.alpha_top - np.conj(self.alpha)) / self._corner_scale

    @property
    def antidiagonal_residual(self) -> float:
        return abs(self.beta_top - self.beta_bot) / self._corner_scale

    def conjugated(self) -> "CornerCoefficients":
        """Corners of ``conj(T)``, i.e. of the mirrored potential."""
        c = complex.conjugate
        return replace(self, alpha=c(self.alpha), beta=c(self.beta), detT=c(self.detT),
                       alpha_top=c(self.alpha_top), beta_top=c(self.beta_top),
                       beta_bot=c(self.beta_bot))

    @property
    def gamma(self) -> complex:
        """Numerator of ``alpha`` over the common denominator ``det T``."""
        return self.alpha * self.detT


@dataclass(frozen=True, eq=False)
class ScatteringSolution:
    """Amplitudes and interior wavefunction for unit incident amplitude.

    For left incidence the wavefunction is ``e^{i m phi} + B e^{-i m phi}``
    for ``m <= -(M-1)`` and ``C e^{i m phi}`` for ``m >= M-1``; right
    incidence is the mirror image.  ``psi_interior`` holds
    ``psi_{-(M-2)} .. psi_{M-2}`` in lattice order for both sides.
    """

    B: complex
    C: complex
    psi_interior: np.ndarray
    side: Side
    phi: PhaseEnergy
    M: int
    corners: Optional[CornerCoefficients] = None
    detT: Optional[complex] = None
    fallback: bool = False
    method: str = "matrix"

    def wavefunction(self, extent: int):
        """Sites ``-extent .. extent`` and the wavefunction there."""
        M = self.M
        if extent < M:
            raise ValueError(f"extent must be >= M={M}")
        m = np.arange(-extent, extent + 1)
        phi = self.phi.phi
        psi = np.empty(m.size, dtype=complex)
        # lattice orientation of the incident side
        s = 1 if self.side is Side.LEFT else -1
        mm = s * m
        incoming = mm <= -(M - 1)
        outgoing = (mm >= M - 1) & ~incoming
        inner = ~(incoming | outgoing)
        psi[incoming] = np.exp(1j * mm[incoming] * phi) + self.B * np.exp(-1j * mm[incoming] * phi)
        psi[outgoing] = self.C * np.exp(1j * mm[outgoing] * phi)
        psi[inner] = self.psi_interior[m[inner] + (M - 2)]
        return m, psi

    def mirrored(self) -> "ScatteringSolution":
        """Reinterpret a left-incidence solve of the reflected potential."""
        other = Side.RIGHT if self.side is Side.LEFT else Side.LEFT
        return replace(self, side=other, psi_interior=self.psi_interior[::-1].copy())

    def as_fallback(self) -> "ScatteringSolution":
        return replace(self, fallback=True)


def site_diagonal(pot: LatticePotential, phi: PhaseEnergy, extent: int) -> np.ndarray:
    """``S_k = 2 cos phi + V_k`` for ``k = -extent .. extent``."""
    M = pot.M
    S = np.full(2 * extent + 1, phi.two_cos, dtype=complex)
    S[extent - (M - 1):extent + M] += pot.full()
    return S


def difference_residual(pot: LatticePotential, sol: ScatteringSolution):
    """Residual of ``-psi_{k-1} + S_k psi_k - psi_{k+1}`` for ``|k| <= M-1``.

    Returns ``(residual, psi_k)`` over those sites.
    """
    M = pot.M
    _, psi = sol.wavefunction(M)
    S = site_diagonal(pot, sol.phi, M)
    r = -psi[:-2] + S[1:-1] * psi[1:-1] - psi[2:]
    return r, psi[1:-1]
