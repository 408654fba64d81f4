import numpy as np
import pytest

from ptscatter.continuum import barrier_transmission, convergence_orders, rectangular_amplitudes


def test_analytic_amplitudes_conserve_flux():
    for E in (0.3, 0.9, 2.0, 5.0):
        B, C = rectangular_amplitudes(E, 1.0, 1.0)
        assert abs(B) ** 2 + abs(C) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_analytic_amplitudes_free_limit():
    B, C = rectangular_amplitudes(2.0, 1e-12, 1.0)
    assert abs(B) < 1e-11
    assert abs(C - 1) < 1e-11


def test_lattice_converges_to_continuum():
    _, C_exact = rectangular_amplitudes(2.0, 1.0, 1.0)
    errs = [abs(barrier_transmission(h, 1.0, 1.0, 2.0) - C_exact) for h in (0.1, 0.05, 0.025)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


def test_second_order_with_jump_averaging():
    orders, diffs, amps = convergence_orders()
    assert orders.shape == (2,)
    np.testing.assert_allclose(orders, 2.0, atol=0.2)
    assert len(amps) == 4


def test_uniform_sampling_is_first_order():
    orders, _, _ = convergence_orders(sampling="uniform")
    np.testing.assert_allclose(orders, 1.0, atol=0.2)


def test_unknown_sampling():
    with pytest.raises(ValueError):
        barrier_transmission(0.1, 1.0, 1.0, 2.0, sampling="spline")
