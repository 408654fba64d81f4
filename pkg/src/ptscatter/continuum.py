"""Continuum-limit driver for the rectangular barrier.

``h`` and the cutoff ``M`` are independent: a barrier of fixed physical
half-width needs ``M ~ half_width / h`` sites, and the refinement study
below halves ``h`` at fixed half-width and fixed energy.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .lattice import phase_from_energy, sample_barrier, sample_rectangular
from .matrix_solver import solve_left

REFINEMENT_STEPS = (0.1, 0.05, 0.025)


def rectangular_amplitudes(E, height, half_width):
    """Exact ``(B, C)`` for the real barrier ``height`` on ``|x| < half_width``.

    Valid for ``E != height``; above and below the barrier alike (the
    interior wavenumber turns imaginary below).
    """
    k = math.sqrt(E)
    q = cmath.sqrt(E - height)
    if q == 0:
        raise ValueError("E equal to the barrier height is a removable special case")
    a2 = 2.0 * half_width
    den = cmath.cos(q * a2) - 0.5j * (k * k + q * q) / (k * q) * cmath.sin(q * a2)
    phase = cmath.exp(-1j * k * a2)
    C = phase / den
    B = 0.5j * (q * q - k * k) / (k * q) * cmath.sin(q * a2) * phase / den
    return B, C


def barrier_transmission(h, half_width, height, E, y_height=0.0, sampling="averaged"):
    """Lattice transmission amplitude ``C`` of the sampled barrier.

    ``sampling="averaged"`` uses :func:`~ptscatter.lattice.sample_barrier`
    (half height on the jump sites); ``"uniform"`` uses
    :func:`~ptscatter.lattice.sample_rectangular` with ``M = half_width / h``.
    """
    if sampling == "averaged":
        pot = sample_barrier(h, half_width, height, y_height)
    elif sampling == "uniform":
        pot = sample_rectangular(h, int(round(half_width / h)), height, y_height)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    return solve_left(pot, phase_from_energy(E, h)).C


def convergence_orders(hs=REFINEMENT_STEPS, half_width=1.0, height=1.0, E=2.0,
                       y_height=0.0, sampling="averaged"):
    """Observed orders ``log2(|C(h) - C(h/2)| / |C(h/2) - C(h/4)|)``.

    One difference ``|C(h) - C(h/2)|`` is formed for every ``h`` in ``hs``
    (successive halvings), giving ``len(hs) - 1`` orders.

    Returns
    -------
    orders : ndarray
    diffs : ndarray
    amplitudes : dict
        ``{h: C(h)}`` for every step used.
    """
    hs = [float(h) for h in hs]
    steps = sorted(set(hs + [h / 2 for h in hs]), reverse=True)
    amps = {h: barrier_transmission(h, half_width, height, E, y_height, sampling)
            for h in steps}
    diffs = np.array([abs(amps[h] - amps[h / 2]) for h in hs])
    orders = np.log2(diffs[:-1] / diffs[1:])
    return orders, diffs, amps
