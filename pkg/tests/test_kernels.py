import numpy as np
import pytest

from ptscatter import kernels
from ptscatter._kernels_py import N_COLS


def tridiag(diag):
    n = len(diag)
    T = np.diag(np.asarray(diag, dtype=complex))
    i = np.arange(n - 1)
    T[i, i + 1] = T[i + 1, i] = -1.0
    return T


def random_diag(rng, n):
    return rng.uniform(-3, 3, n) + 1j * rng.uniform(-3, 3, n)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40])
def test_continuant_is_determinant(backend, n):
    rng = np.random.default_rng(n)
    d = random_diag(rng, n)
    det, dmax = backend.continuant(d)
    ref = np.linalg.det(tridiag(d))
    assert abs(det - ref) <= 1e-11 * max(1.0, abs(ref))
    assert dmax >= max(1.0, abs(det))


def test_continuant_worked_value(backend):
    det, _ = backend.continuant(np.array([1 - 1j, 2, 1 + 1j]))
    assert det == pytest.approx(2.0)


@pytest.mark.parametrize("n", [1, 2, 5, 30])
def test_solve_factored(backend, n):
    rng = np.random.default_rng(10 + n)
    d = random_diag(rng, n) + 4.0  # diagonally dominant, no pivoting needed
    b = random_diag(rng, n)
    w, minpiv = backend.factor(d)
    assert minpiv > 0
    x = backend.solve_factored(w, b)
    np.testing.assert_allclose(tridiag(d) @ x, b, atol=1e-12)


def test_factor_zero_pivot(backend):
    w, minpiv = backend.factor(np.array([0.0, 1.0, 2.0], dtype=complex))
    assert minpiv == 0.0


@pytest.mark.parametrize("n", [1, 2, 3, 9, 25])
def test_corners_match_dense_inverse(backend, n):
    rng = np.random.default_rng(20 + n)
    d = random_diag(rng, n) + 3.0
    at, a, bt, bb, det, dmax, minpiv = backend.corners(d)
    R = np.linalg.inv(tridiag(d))
    for got, ref in ((at, R[0, 0]), (a, R[-1, -1]), (bt, R[0, -1]), (bb, R[-1, 0])):
        assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))
    assert abs(bt * det - 1.0) < 1e-12


def test_corners_zero_pivot_gives_nan(backend):
    out = backend.corners(np.array([0.0, 1.0, 0.0], dtype=complex))
    assert all(np.isnan(x) for x in out[:4])
    assert out[6] == 0.0


def test_batch_matches_single(backend):
    rng = np.random.default_rng(3)
    base = random_diag(rng, 11)
    shifts = np.linspace(-1.9, 1.9, 17)
    out = backend.corners_batch(base, shifts)
    assert out.shape == (17, N_COLS)
    for k, s in enumerate(shifts):
        single = np.array(backend.corners(base + s), dtype=complex)
        np.testing.assert_allclose(out[k], single, rtol=1e-13, atol=1e-300)


def test_backends_agree():
    backends = kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(4)
    base = rng.uniform(-1, 1, 99) + 0j
    shifts = 2 * np.cos(np.linspace(0.05, 3.09, 2000))
    a = backends["cython"].corners_batch(base, shifts)
    b = backends["python"].corners_batch(base, shifts)
    # compare where T is well conditioned; elsewhere both are roundoff
    ok = (b[:, kernels.MINPIV].real > 1e-2) & (
        np.abs(b[:, kernels.DET]) > 1e-3 * b[:, kernels.DMAX].real)
    assert ok.mean() > 0.5
    np.testing.assert_allclose(a[ok], b[ok], rtol=1e-9)


def test_backend_selection_env(monkeypatch):
    import importlib
    monkeypatch.setenv("PTSCATTER_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.corners is mod.python_backend.corners
    finally:
        monkeypatch.delenv("PTSCATTER_PURE_PYTHON")
        importlib.reload(kernels)
