"""Both kernel implementations against closed forms and each other."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import KAPPA, OMEGA_R


def constant_drive_solution(alpha0, rate, kappa, eps, t):
    lam = -(0.5 * kappa + 1j * rate)
    return eps / lam + np.exp(lam * t) * (alpha0 - eps / lam)


def test_free_decay(kernels):
    n, dt = 500, 1e-9
    drive = np.zeros(2 * n + 1, dtype=complex)
    alphas, areas = kernels.langevin_trajectory(1 + 1j, OMEGA_R, KAPPA, 0.0, dt, drive, 1)
    t = np.arange(n + 1) * dt
    lam = -(0.5 * KAPPA + 1j * OMEGA_R)
    np.testing.assert_allclose(alphas, (1 + 1j) * np.exp(lam * t), rtol=1e-12)
    np.testing.assert_allclose(areas, (1 + 1j) * np.expm1(lam * t) / lam, rtol=1e-9, atol=1e-20)


@settings(max_examples=25, deadline=None)
@given(st.floats(-5e6, 5e6), st.floats(1e3, 1e6), st.complex_numbers(max_magnitude=1e6))
def test_constant_drive_exactness(rate, kappa, eps):
    from pulseforge import _kernels_py

    n, dt = 400, 2e-9
    drive = np.full(2 * n + 1, eps, dtype=complex)
    alphas, _ = _kernels_py.langevin_trajectory(0.3j, rate, kappa, 0.0, dt, drive, 40)
    t = np.arange(0, n + 1, 40) * dt
    exact = constant_drive_solution(0.3j, rate, kappa, eps, t)
    scale = max(np.max(np.abs(exact)), 1e-300)
    assert np.max(np.abs(alphas - exact)) <= 1e-8 * scale


def test_stride_output(kernels):
    drive = np.ones(2 * 100 + 1, dtype=complex)
    a, q = kernels.langevin_trajectory(0j, 0.0, KAPPA, 0.0, 1e-8, drive, 25)
    assert a.shape == q.shape == (5,)
    full, _ = kernels.langevin_trajectory(0j, 0.0, KAPPA, 0.0, 1e-8, drive, 1)
    np.testing.assert_array_equal(a, full[::25])


def test_stride_must_divide(kernels):
    with pytest.raises(ValueError):
        kernels.langevin_trajectory(0j, 0.0, KAPPA, 0.0, 1e-8, np.ones(2 * 10 + 1, complex), 3)


def test_batch_length_mismatch(kernels):
    with pytest.raises(ValueError):
        kernels.langevin_final_batch(np.zeros(3, complex), np.zeros(2), KAPPA, 0.0, 1e-8,
                                     np.ones(5, complex))


def test_batch_agrees_with_single(kernels):
    rng = np.random.default_rng(5)
    n = 800
    drive = (rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)) * 1e6
    rates = np.array([-2e7, 0.0, OMEGA_R, 4e6])
    alpha0 = np.array([0.1, 1j, -2.0, 0.5 + 0.5j])
    final, area = kernels.langevin_final_batch(alpha0, rates, KAPPA, 3e4, 1e-9, drive)
    for i in range(rates.size):
        a, q = kernels.langevin_trajectory(alpha0[i], rates[i], KAPPA, 3e4, 1e-9, drive, n)
        assert final[i] == pytest.approx(a[-1], rel=1e-13, abs=1e-15)
        assert area[i] == pytest.approx(q[-1], rel=1e-13, abs=1e-24)


def test_implementations_identical_up_to_rounding():
    from pulseforge import _kernels_py

    cy = pytest.importorskip("pulseforge._kernels")
    rng = np.random.default_rng(9)
    n = 2000
    drive = (rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)) * 1e6
    for kerr in (0.0, 1e5):
        a_py, q_py = _kernels_py.langevin_trajectory(0.2 - 0.1j, OMEGA_R, KAPPA, kerr, 1e-9, drive, 10)
        a_cy, q_cy = cy.langevin_trajectory(0.2 - 0.1j, OMEGA_R, KAPPA, kerr, 1e-9, drive, 10)
        np.testing.assert_allclose(a_cy, a_py, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(q_cy, q_py, rtol=1e-12, atol=1e-22)
        rates = np.linspace(-3e7, 3e7, 7)
        f_py, ar_py = _kernels_py.langevin_final_batch(np.zeros(7, complex), rates, KAPPA, kerr, 1e-9, drive)
        f_cy, ar_cy = cy.langevin_final_batch(np.zeros(7, complex), rates, KAPPA, kerr, 1e-9, drive)
        np.testing.assert_allclose(f_cy, f_py, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(ar_cy, ar_py, rtol=1e-12, atol=1e-22)
