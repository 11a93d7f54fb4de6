# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernels for the driven, damped resonator amplitude.

Both kernels integrate

    dα/dt = -(κ/2 + i·rate) α - i·kerr·|α|² α - ε(t)

with a fixed-step integrating-factor RK4: the linear part is propagated
exactly, the RK4 stages act on the drive and Kerr terms. The running area
∫α dt is integrated alongside with the same stages.

``drive`` holds ε sampled at t_n and at the half steps, i.e. 2N + 1 values
for N steps.
"""

import numpy as np

from libc.math cimport cos, exp, sin


cdef inline double complex _nonlinear(double complex drive, double complex a,
                                      double kerr) noexcept nogil:
    cdef double n = a.real * a.real + a.imag * a.imag
    return -drive - 1j * kerr * n * a


cdef inline void _step(double complex *a, double complex *q, double complex E,
                       double complex E2, double h, double kerr,
                       double complex d0, double complex dm,
                       double complex d1) noexcept nogil:
    cdef double complex a0 = a[0]
    cdef double complex s2, s3, s4, k1, k2, k3, k4
    k1 = _nonlinear(d0, a0, kerr)
    s2 = E * (a0 + 0.5 * h * k1)
    k2 = _nonlinear(dm, s2, kerr)
    s3 = E * a0 + 0.5 * h * k2
    k3 = _nonlinear(dm, s3, kerr)
    s4 = E2 * a0 + h * E * k3
    k4 = _nonlinear(d1, s4, kerr)
    q[0] = q[0] + h / 6.0 * (a0 + 2.0 * s2 + 2.0 * s3 + s4)
    a[0] = E2 * a0 + h / 6.0 * (E2 * k1 + 2.0 * E * (k2 + k3) + k4)


cdef inline double complex _half_step_factor(double rate, double kappa,
                                             double h) noexcept nogil:
    cdef double mag = exp(-0.25 * kappa * h)
    return mag * cos(0.5 * rate * h) - 1j * mag * sin(0.5 * rate * h)


def langevin_trajectory(double complex alpha0, double rate, double kappa,
                        double kerr, double dt,
                        const double complex[::1] drive, Py_ssize_t stride=1):
    """Integrate one trajectory, storing every ``stride``-th step."""
    cdef Py_ssize_t n_steps = (drive.shape[0] - 1) // 2
    if stride < 1 or n_steps % stride != 0:
        raise ValueError("stride must divide the number of steps")
    cdef Py_ssize_t n_out = n_steps // stride + 1
    alphas_arr = np.empty(n_out, dtype=np.complex128)
    areas_arr = np.empty(n_out, dtype=np.complex128)
    cdef double complex[::1] alphas = alphas_arr
    cdef double complex[::1] areas = areas_arr
    cdef double complex E = _half_step_factor(rate, kappa, dt)
    cdef double complex E2 = E * E
    cdef double complex a = alpha0
    cdef double complex q = 0.0
    cdef Py_ssize_t n, k = 1
    alphas[0] = a
    areas[0] = q
    with nogil:
        for n in range(n_steps):
            _step(&a, &q, E, E2, dt, kerr,
                  drive[2 * n], drive[2 * n + 1], drive[2 * n + 2])
            if (n + 1) % stride == 0:
                alphas[k] = a
                areas[k] = q
                k += 1
    return alphas_arr, areas_arr


def langevin_final_batch(const double complex[::1] alpha0,
                         const double[::1] rate, double kappa, double kerr,
                         double dt, const double complex[::1] drive):
    """Integrate many trajectories sharing one drive; return endpoints only."""
    cdef Py_ssize_t m = alpha0.shape[0]
    if rate.shape[0] != m:
        raise ValueError("alpha0 and rate must have equal length")
    cdef Py_ssize_t n_steps = (drive.shape[0] - 1) // 2
    final_arr = np.empty(m, dtype=np.complex128)
    area_arr = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] final = final_arr
    cdef double complex[::1] area = area_arr
    cdef double complex E, E2, a, q
    cdef Py_ssize_t i, n
    with nogil:
        for i in range(m):
            E = _half_step_factor(rate[i], kappa, dt)
            E2 = E * E
            a = alpha0[i]
            q = 0.0
            for n in range(n_steps):
                _step(&a, &q, E, E2, dt, kerr,
                      drive[2 * n], drive[2 * n + 1], drive[2 * n + 2])
            final[i] = a
            area[i] = q
    return final_arr, area_arr
