import math

import numpy as np
import pytest

from ptscatter import (BandViolation, DimensionMismatch, InvalidStep, NonFinite, make_potential,
                       phase, phase_from_energy, sample_barrier, sample_rectangular)


def test_full_potential_is_pt_symmetric():
    p = make_potential(0.5, [1.0, 2.0, 3.0], [0.5, -1.5])
    V = p.full()
    assert V.shape == (5,)
    np.testing.assert_array_equal(V[::-1], np.conj(V))
    assert V[2] == 1.0
    assert V[3] == 2 + 0.5j and V[4] == 3 - 1.5j


def test_potential_is_immutable():
    p = make_potential(1.0, [1.0, 2.0], [0.5])
    with pytest.raises(ValueError):
        p.Z[0] = 5.0
    with pytest.raises(AttributeError):
        p.h = 2.0


def test_reflected_flips_y_and_is_involution():
    p = make_potential(1.0, [1.0, 2.0], [0.5])
    r = p.reflected()
    assert r.Y[0] == -0.5 and r.Z.tolist() == [1.0, 2.0]
    assert r.reflected() == p


def test_equality_and_hash():
    a = make_potential(1.0, [1.0, 2.0], [0.5])
    b = make_potential(1.0, [1.0, 2.0], [0.5])
    assert a == b and hash(a) == hash(b)
    assert a != make_potential(1.0, [1.0, 2.0], [0.25])


def test_hermitian_flag():
    assert make_potential(1.0, [1.0, 2.0], [0.0]).is_hermitian()
    assert not make_potential(1.0, [1.0, 2.0], [0.1]).is_hermitian()


@pytest.mark.parametrize("h,Z,Y,err", [
    (1.0, [1.0, 2.0], [], DimensionMismatch),
    (1.0, [], [], DimensionMismatch),
    (0.0, [1.0], [], InvalidStep),
    (-1.0, [1.0], [], InvalidStep),
    (math.nan, [1.0], [], NonFinite),
    (1.0, [math.inf], [], NonFinite),
    (1.0, [1.0, 1.0], [math.nan], NonFinite),
])
def test_make_potential_rejects(h, Z, Y, err):
    with pytest.raises(err):
        make_potential(h, Z, Y)


def test_energy_of_phase():
    ph = phase(math.pi / 2, h=0.5)
    assert ph.E == pytest.approx(2.0 / 0.25)
    assert ph.two_cos == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("phi", [0.0, math.pi, -0.1, 4.0])
def test_phase_rejects_band_edges(phi):
    with pytest.raises(BandViolation):
        phase(phi)


@pytest.mark.parametrize("E", [0.0, 4.0, 5.0, -1.0])
def test_energy_outside_band(E):
    with pytest.raises(BandViolation):
        phase_from_energy(E, 1.0)


def test_band_scales_with_step():
    with pytest.raises(BandViolation):
        phase_from_energy(16.0, 0.5)
    assert 0 < phase_from_energy(15.9, 0.5).phi < math.pi


@pytest.mark.parametrize("phi", np.linspace(1e-3, 3.0, 60))
def test_phase_energy_round_trip(phi):
    back = phase_from_energy(phase(phi, 0.7).E, 0.7).phi
    assert abs(back - phi) <= 1e-14 * phi


def test_round_trip_degrades_at_band_top():
    # E is flat in phi at pi: an E rounding of one ulp moves phi by ~sqrt(ulp)
    phi = math.pi - 1e-6
    back = phase_from_energy(phase(phi).E, 1.0).phi
    assert 1e-14 < abs(back - phi) < 1e-8


def test_sample_rectangular_scales_by_h2():
    p = sample_rectangular(0.1, 10, 1.0, 0.5)
    assert p.M == 10
    np.testing.assert_allclose(p.Z, 0.01)
    np.testing.assert_allclose(p.Y, 0.005)


def test_sample_barrier_halves_jump_sites():
    p = sample_barrier(0.25, 1.0, 2.0, 1.0)
    assert p.M == 5
    np.testing.assert_allclose(p.Z, [0.125, 0.125, 0.125, 0.125, 0.0625])
    np.testing.assert_allclose(p.Y, [0.0625, 0.0625, 0.0625, 0.03125])


def test_sample_barrier_needs_commensurate_width():
    with pytest.raises(DimensionMismatch):
        sample_barrier(0.3, 1.0, 1.0)
