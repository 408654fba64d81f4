import math

import numpy as np
import pytest

import oracles
from conftest import random_pt
from ptscatter import (DimensionMismatch, LengthMismatch, SpectralSingularity, closed_form_M1,
                       closed_form_M2, discrete_wronskian, make_potential, phase,
                       solve_full_matching, solve_left)
from ptscatter.matching_solver import assemble
from ptscatter.solution import difference_residual


def test_assemble_shapes():
    sys1 = assemble(make_potential(1.0, [2.0], []), phase(1.0))
    assert sys1.dim == 2 and sys1.M == 1
    sys3 = assemble(make_potential(1.0, [1.0, 2.0, 3.0], [0.5, 0.5]), phase(1.0))
    assert sys3.dim == 5
    # (B, psi, C) ordering keeps the matrix tridiagonal
    A = sys3.matrix
    assert np.all(np.triu(A, 2) == 0) and np.all(np.tril(A, -2) == 0)


def test_closed_form_M1_worked():
    B, C = closed_form_M1(2.0, phase(math.pi / 2))
    assert C == pytest.approx((1 - 1j) / 2)
    assert B == pytest.approx(-(1 + 1j) / 2)
    assert B == pytest.approx(C - 1)


def test_closed_form_M2_worked(worked):
    pot, phi = worked
    B, C, psi0 = closed_form_M2(pot, phase(phi))
    assert abs(B) < 1e-12 and abs(C + 1) < 1e-12 and abs(psi0 + 1j) < 1e-12


def test_closed_form_M2_needs_M2():
    with pytest.raises(DimensionMismatch):
        closed_form_M2(make_potential(1.0, [1.0], []), phase(1.0))


def test_full_matching_worked(worked):
    pot, phi = worked
    s = solve_full_matching(pot, phase(phi))
    assert abs(s.B) < 1e-12 and abs(s.C + 1) < 1e-12
    np.testing.assert_allclose(s.psi_interior, [-1j], atol=1e-12)
    r = solve_full_matching(pot, phase(phi), "right")
    assert abs(r.B - 4j) < 1e-12


def test_full_matching_against_oracle():
    rng = np.random.default_rng(11)
    for _ in range(100):
        pot = random_pt(rng, max_m=10)
        phi = rng.uniform(0.1, 3.0)
        s = solve_full_matching(pot, phase(phi))
        B, C = oracles.transfer_amplitudes(pot.Z, pot.Y, phi)
        scale = max(1.0, abs(B), abs(C))
        assert abs(s.B - B) <= 1e-10 * scale and abs(s.C - C) <= 1e-10 * scale
        r, _ = difference_residual(pot, s)
        assert np.max(np.abs(r)) <= 1e-10 * scale


def test_matching_agrees_with_matrix_method_large_M():
    rng = np.random.default_rng(12)
    for _ in range(20):
        pot = random_pt(rng, max_m=50)
        phi = phase(rng.uniform(0.1, 3.0))
        a, b = solve_full_matching(pot, phi), solve_left(pot, phi)
        scale = max(1.0, abs(a.B), abs(a.C))
        assert abs(a.B - b.B) <= 1e-10 * scale and abs(a.C - b.C) <= 1e-10 * scale


def test_matching_pole():
    with pytest.raises(SpectralSingularity):
        solve_full_matching(make_potential(1.0, [0.0, 0.0], [1.0]), phase(math.pi / 4))


def test_wronskian_of_scattering_pair_is_constant():
    pot = make_potential(1.0, [0.3, -1.2, 0.7], [0.4, -0.9])
    phi = phase(1.1)
    _, psi_l = solve_left(pot, phi).wavefunction(6)
    _, psi_r = solve_full_matching(pot, phi, "right").wavefunction(6)
    W = discrete_wronskian(psi_l, psi_r)
    assert np.max(np.abs(W - W[0])) < 1e-12 * np.max(np.abs(W))


def test_wronskian_rejects_bad_input():
    with pytest.raises(LengthMismatch):
        discrete_wronskian([1, 2, 3], [1, 2])
    with pytest.raises(LengthMismatch):
        discrete_wronskian([1], [1])
