"""Lattice potentials and the phase <-> energy map.

Units follow hbar = 2m = 1, so the continuum equation is
``-psi'' + V psi = E psi``.  On the lattice ``x_k = k h`` the couplings are
the dimensionless products ``V_k = h**2 V(x_k)`` and the energy enters only
through the phase ``phi`` with ``2 cos(phi) = 2 - h**2 E``.

A PT-symmetric potential obeys ``V(-x) = conj(V(x))``.  Only the ``k >= 0``
half is stored: real parts ``Z_0..Z_{M-1}`` and imaginary parts
``Y_1..Y_{M-1}`` (``Y_0 = 0``).  The full array is rebuilt on demand, so the
symmetry cannot be broken by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BandViolation, DimensionMismatch, InvalidStep, NonFinite


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LatticePotential:
    """Short-range PT-symmetric lattice potential with cutoff ``M``.

    ``V_k = 0`` for ``|k| >= M``.  Use :func:`make_potential` rather than the
    constructor, which skips validation.
    """

    h: float
    Z: np.ndarray
    Y: np.ndarray

    @property
    def M(self) -> int:
        return len(self.Z)

    def full(self) -> np.ndarray:
        """Complex ``V_k`` for ``k = -(M-1), ..., M-1``."""
        right = self.Z.astype(complex)
        right[1:] += 1j * self.Y
        return np.concatenate([np.conj(right[:0:-1]), right])

    def reflected(self) -> "LatticePotential":
        """Mirror image ``x -> -x``; for a PT potential this is ``Y -> -Y``."""
        return LatticePotential(self.h, self.Z, _frozen(-self.Y))

    def is_hermitian(self) -> bool:
        return not np.any(self.Y)

    def to_dict(self) -> dict:
        return {"h": float(self.h), "Z": self.Z.tolist(), "Y": self.Y.tolist()}

    def __eq__(self, other):
        if not isinstance(other, LatticePotential):
            return NotImplemented
        return (self.h == other.h and np.array_equal(self.Z, other.Z)
                and np.array_equal(self.Y, other.Y))

    def __hash__(self):
        return hash((self.h, self.Z.tobytes(), self.Y.tobytes()))

    def __repr__(self):
        return (f"LatticePotential(h={self.h!r}, Z={self.Z.tolist()!r}, "
                f"Y={self.Y.tolist()!r})")


@dataclass(frozen=True)
class PhaseEnergy:
    """Lattice phase ``phi`` in ``(0, pi)`` together with the step ``h``."""

    phi: float
    h: float

    @property
    def E(self) -> float:
        # 4 sin^2(phi/2) == 2 - 2 cos(phi) without cancellation near phi = 0
        return 4.0 * math.sin(0.5 * self.phi) ** 2 / self.h ** 2

    @property
    def two_cos(self) -> float:
        return 2.0 * math.cos(self.phi)


def make_potential(h, Z, Y) -> LatticePotential:
    """Validate couplings and build a :class:`LatticePotential`.

    Parameters
    ----------
    h : float
        Lattice step, strictly positive.
    Z : sequence of float
        ``Z_0 .. Z_{M-1}``; its length fixes the cutoff ``M``.
    Y : sequence of float
        ``Y_1 .. Y_{M-1}``, so ``len(Y) == len(Z) - 1``.
    """
    Z = np.asarray(Z, dtype=float).reshape(-1)
    Y = np.asarray(Y, dtype=float).reshape(-1)
    h = float(h)
    if not math.isfinite(h):
        raise NonFinite(f"lattice step is not finite: {h}")
    if h <= 0:
        raise InvalidStep(f"lattice step must be positive, got {h}")
    if Z.size == 0:
        raise DimensionMismatch("Z must contain at least Z_0")
    if Y.size != Z.size - 1:
        raise DimensionMismatch(
            f"expected {Z.size - 1} imaginary couplings for M={Z.size}, got {Y.size}")
    if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(Y))):
        raise NonFinite("couplings must be finite")
    return LatticePotential(h, _frozen(Z), _frozen(Y))


def sample_rectangular(h, M, z_height, y_height) -> LatticePotential:
    """Lattice sampling of ``z + i y sign(x)`` on ``|x| < M h``.

    Every site with ``|k| <= M-1`` carries the full height.
    """
    M = int(M)
    if M < 1:
        raise DimensionMismatch(f"cutoff M must be >= 1, got {M}")
    h2 = float(h) ** 2
    return make_potential(h, np.full(M, h2 * z_height), np.full(M - 1, h2 * y_height))


def sample_barrier(h, half_width, z_height, y_height=0.0) -> LatticePotential:
    """Sample the barrier ``z + i y sign(x)`` on ``|x| < half_width``.

    ``half_width`` must be an integer multiple ``N h``.  The sites sitting on
    the jumps at ``x = +-half_width`` take the mean of the one-sided limits
    (half height), the same convention that gives ``Y_0 = 0`` at the jump of
    ``sign(x)``.  The cutoff is therefore ``M = N + 1``.  With this sampling
    the lattice amplitudes converge to the continuum ones as ``O(h**2)``;
    :func:`sample_rectangular` places the effective edge at
    ``(N - 1/2) h`` and converges only as ``O(h)``.
    """
    h = float(h)
    ratio = half_width / h
    N = int(round(ratio))
    if N < 1 or abs(ratio - N) > 1e-9 * max(1.0, ratio):
        raise DimensionMismatch(
            f"half_width={half_width} is not a positive multiple of h={h}")
    h2 = h * h
    Z = np.full(N + 1, h2 * z_height)
    Y = np.full(N, h2 * y_height)
    Z[-1] *= 0.5
    Y[-1] *= 0.5
    return make_potential(h, Z, Y)


def phase(phi, h=1.0) -> PhaseEnergy:
    """Wrap a lattice phase, rejecting the closed band edges."""
    phi = float(phi)
    if not math.isfinite(phi):
        raise NonFinite(f"phase is not finite: {phi}")
    if not 0.0 < phi < math.pi:
        raise BandViolation(f"phase {phi} outside the open interval (0, pi)", phi)
    if not h > 0:
        raise InvalidStep(f"lattice step must be positive, got {h}")
    return PhaseEnergy(phi, float(h))


def phase_from_energy(E, h) -> PhaseEnergy:
    """Invert ``E = (2 - 2 cos phi) / h**2`` on the band ``0 < E < 4/h**2``."""
    E = float(E)
    h = float(h)
    if not (math.isfinite(E) and math.isfinite(h)):
        raise NonFinite("energy and step must be finite")
    if h <= 0:
        raise InvalidStep(f"lattice step must be positive, got {h}")
    if not 0.0 < E < 4.0 / h ** 2:
        raise BandViolation(
            f"E={E} outside the lattice band (0, {4.0 / h ** 2}) for h={h}", E)
    # phi = 2 arcsin(h sqrt(E) / 2) is arccos(1 - h^2 E / 2) without the
    # loss of digits near the lower band edge
    phi = 2.0 * math.asin(0.5 * h * math.sqrt(E))
    if not 0.0 < phi < math.pi:
        raise BandViolation(f"E={E} rounds onto a band edge for h={h}", E)
    return PhaseEnergy(phi, h)
