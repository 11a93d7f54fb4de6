"""Pure-Python twin of ``_kernels.pyx``.

Same algorithm and call signatures. The single-trajectory kernel loops over
Python complex scalars; the batch kernel vectorises across trajectories with
numpy and loops over time.
"""

from __future__ import annotations

import cmath

import numpy as np


def _half_step_factor(rate, kappa, h):
    return np.exp(-(0.5 * kappa + 1j * rate) * 0.5 * h)


def langevin_trajectory(alpha0, rate, kappa, kerr, dt, drive, stride=1):
    drive = np.ascontiguousarray(drive, dtype=np.complex128)
    n_steps = (drive.shape[0] - 1) // 2
    if stride < 1 or n_steps % stride != 0:
        raise ValueError("stride must divide the number of steps")
    n_out = n_steps // stride + 1
    alphas = np.empty(n_out, dtype=np.complex128)
    areas = np.empty(n_out, dtype=np.complex128)

    E = cmath.exp(-(0.5 * kappa + 1j * rate) * 0.5 * dt)
    E2 = E * E
    h = float(dt)
    h2 = 0.5 * h
    h6 = h / 6.0
    kerr = float(kerr)
    d = drive.tolist()
    a = complex(alpha0)
    q = 0j
    alphas[0] = a
    areas[0] = q
    k = 1
    for n in range(n_steps):
        d0, dm, d1 = d[2 * n], d[2 * n + 1], d[2 * n + 2]
        if kerr:
            k1 = -d0 - 1j * kerr * (a.real * a.real + a.imag * a.imag) * a
            s2 = E * (a + h2 * k1)
            k2 = -dm - 1j * kerr * (s2.real * s2.real + s2.imag * s2.imag) * s2
            s3 = E * a + h2 * k2
            k3 = -dm - 1j * kerr * (s3.real * s3.real + s3.imag * s3.imag) * s3
            s4 = E2 * a + h * E * k3
            k4 = -d1 - 1j * kerr * (s4.real * s4.real + s4.imag * s4.imag) * s4
        else:
            k1 = -d0
            s2 = E * (a + h2 * k1)
            k2 = k3 = -dm
            s3 = E * a + h2 * k2
            s4 = E2 * a + h * E * k3
            k4 = -d1
        q += h6 * (a + 2.0 * s2 + 2.0 * s3 + s4)
        a = E2 * a + h6 * (E2 * k1 + 2.0 * E * (k2 + k3) + k4)
        if (n + 1) % stride == 0:
            alphas[k] = a
            areas[k] = q
            k += 1
    return alphas, areas


def _nonlinear(drive, a, kerr):
    if kerr:
        return -drive - 1j * kerr * (a.real**2 + a.imag**2) * a
    return np.full_like(a, -drive)


def langevin_final_batch(alpha0, rate, kappa, kerr, dt, drive):
    alpha0 = np.ascontiguousarray(alpha0, dtype=np.complex128)
    rate = np.ascontiguousarray(rate, dtype=np.float64)
    if rate.shape != alpha0.shape:
        raise ValueError("alpha0 and rate must have equal length")
    drive = np.ascontiguousarray(drive, dtype=np.complex128)
    n_steps = (drive.shape[0] - 1) // 2

    E = _half_step_factor(rate, kappa, dt)
    E2 = E * E
    h = float(dt)
    a = alpha0.copy()
    q = np.zeros_like(a)
    for n in range(n_steps):
        d0, dm, d1 = drive[2 * n], drive[2 * n + 1], drive[2 * n + 2]
        k1 = _nonlinear(d0, a, kerr)
        s2 = E * (a + 0.5 * h * k1)
        k2 = _nonlinear(dm, s2, kerr)
        s3 = E * a + 0.5 * h * k2
        k3 = _nonlinear(dm, s3, kerr)
        s4 = E2 * a + h * E * k3
        k4 = _nonlinear(d1, s4, kerr)
        q += h / 6.0 * (a + 2.0 * s2 + 2.0 * s3 + s4)
        a = E2 * a + h / 6.0 * (E2 * k1 + 2.0 * E * (k2 + k3) + k4)
    return a, q
