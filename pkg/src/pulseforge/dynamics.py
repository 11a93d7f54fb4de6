"""Trajectory generation for α̇ = -iωα - κα/2 - ε(t).

Three routes:

* :func:`integrate` - fixed-step integrating-factor RK4 (compiled kernel when
  available), with an optional semiclassical Kerr term -i·k·|α|²·α.
* :func:`response_exact` / :func:`area_exact` - closed-form convolution for
  pulses of the form c·exp(νt).
* :func:`fock_oracle` - RK4 on the truncated-Fock density matrix, used to
  cross-check the Langevin picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .lincontrol import SystemMatrix
from .model import SimOptions, Trajectory, ValidationError
from .pulses import Pulse


class TruncationError(RuntimeError):
    """Fock space too small: top-level population exceeded the guard."""


def default_dt(rotation_rate: float, t_f: float) -> float:
    dt = t_f / 2000.0
    if rotation_rate != 0:
        dt = min(dt, 2.0 * math.pi / (50.0 * abs(rotation_rate)))
    return dt


def _step_count(t_f: float, dt: float, n_out: int | None) -> tuple[int, int]:
    n = max(1, math.ceil(t_f / dt * (1 - 1e-12)))
    if n_out is None:
        return n, 1
    if n_out < 2:
        raise ValidationError("n_out must be at least 2")
    segments = n_out - 1
    stride = max(1, math.ceil(n / segments))
    return stride * segments, stride


def _check_pulse_span(pulse: Pulse, t_f: float) -> None:
    if pulse.t_f < t_f * (1 - 1e-12):
        raise ValidationError(f"pulse lasts {pulse.t_f} s, shorter than t_f = {t_f} s")


def sample_drive(pulse: Pulse, t_f: float, n_steps: int) -> np.ndarray:
    """ε at every step and half step (2N + 1 samples)."""
    nodes = np.linspace(0.0, t_f, 2 * n_steps + 1)
    drive = np.ascontiguousarray(pulse(nodes), dtype=np.complex128)
    if not np.all(np.isfinite(drive)):
        raise ValidationError("pulse produced non-finite values")
    return drive


def integrate(sys: SystemMatrix, pulse: Pulse, alpha0: complex, t_f: float,
              opts: SimOptions | None = None, n_out: int | None = None) -> Trajectory:
    """Integrate the Langevin equation on [0, t_f].

    Parameters
    ----------
    sys : SystemMatrix
        Rotation rate and decay.
    pulse : Pulse
        Drive; must cover [0, t_f].
    alpha0 : complex
        Initial amplitude.
    t_f : float
        Final time (s).
    opts : SimOptions, optional
        Step size (default ``min(2π/(50|ω|), t_f/2000)``) and Kerr coefficient.
    n_out : int, optional
        Number of stored samples. The step count is rounded up so that the
        output grid is a subsampling of the integration grid. By default
        every step is stored.

    Returns
    -------
    Trajectory
        With ``area`` = ∫₀^t α dt integrated by the same RK4 stages.
    """
    opts = opts or SimOptions()
    if not t_f > 0:
        raise ValidationError("t_f must be positive")
    _check_pulse_span(pulse, t_f)
    dt = opts.dt if opts.dt is not None else default_dt(sys.rotation_rate, t_f)
    if dt >= t_f:
        raise ValidationError(f"dt = {dt} must be smaller than t_f = {t_f}")
    n_steps, stride = _step_count(t_f, dt, n_out)
    h = t_f / n_steps
    drive = sample_drive(pulse, t_f, n_steps)
    alphas, area = _backend.kernels.langevin_trajectory(
        complex(alpha0), float(sys.rotation_rate), float(sys.kappa), float(opts.kerr_k),
        h, drive, stride,
    )
    times = np.linspace(0.0, t_f, n_steps // stride + 1)
    return Trajectory(times, alphas, area)


def integrate_final_batch(rates, kappa: float, pulse: Pulse, alpha0, t_f: float,
                          opts: SimOptions | None = None) -> tuple[np.ndarray, np.ndarray]:
    """α(t_f) and ∫₀^t_f α dt for many rotation rates under one drive."""
    opts = opts or SimOptions()
    rates = np.ascontiguousarray(rates, dtype=np.float64)
    alpha0 = np.ascontiguousarray(np.broadcast_to(alpha0, rates.shape), dtype=np.complex128)
    _check_pulse_span(pulse, t_f)
    fastest = float(np.max(np.abs(rates))) if rates.size else 0.0
    dt = opts.dt if opts.dt is not None else default_dt(fastest, t_f)
    n_steps, _ = _step_count(t_f, dt, None)
    drive = sample_drive(pulse, t_f, n_steps)
    return _backend.kernels.langevin_final_batch(
        alpha0, rates, float(kappa), float(opts.kerr_k), t_f / n_steps, drive
    )


# closed-form convolution ------------------------------------------------------


def _phi1(z, t):
    """(e^{zt} - 1)/z, continuous at z = 0."""
    z = np.asarray(z, dtype=complex)
    t = np.asarray(t, dtype=float)
    zt = z * t
    small = np.abs(zt) < 1e-8
    safe_z = np.where(small, 1.0, z)
    return np.where(small, t * (1 + 0.5 * zt), np.expm1(zt) / safe_z)


def _dd_exp(nu, lam, t):
    """(e^{νt} - e^{λt})/(ν - λ)."""
    return np.exp(np.asarray(lam) * t) * _phi1(np.asarray(nu) - np.asarray(lam), t)


def _dd_area(nu, lam, t):
    """∫₀^t (e^{νs} - e^{λs})/(ν - λ) ds, stable as ν → λ."""
    nu = np.asarray(nu, dtype=complex)
    lam = np.asarray(lam, dtype=complex)
    t = np.asarray(t, dtype=float)
    delta = nu - lam
    close = np.abs(delta * t) < 1e-3
    safe_delta = np.where(close, 1.0, delta)
    direct = (_phi1(nu, t) - _phi1(lam, t)) / safe_delta
    # series: (e^{δs}-1)/δ = s + δ s²/2 + δ² s³/6 + δ³ s⁴/24, times e^{λs}
    i0 = _phi1(lam, t)
    e = np.exp(lam * t)
    i1 = (t * e - i0) / lam
    i2 = (t**2 * e - 2 * i1) / lam
    i3 = (t**3 * e - 3 * i2) / lam
    i4 = (t**4 * e - 4 * i3) / lam
    series = i1 + delta * i2 / 2 + delta**2 * i3 / 6 + delta**3 * i4 / 24
    return np.where(close, series, direct)


def _exp_form(pulse: Pulse) -> tuple[complex, complex]:
    form = pulse.exponential_form()
    if form is None:
        raise ValidationError(
            f"{type(pulse).__name__} has no closed-form response; use integrate()"
        )
    return form


def response_exact(sys: SystemMatrix, pulse: Pulse, t, alpha0: complex = 0j):
    """Exact α(t) for exponential pulses (EnergyOptimal, TimeOptimal, Constant)."""
    c, nu = _exp_form(pulse)
    out = exact_response_terms(sys.lam, c, nu, t, alpha0)
    return complex(out) if np.ndim(out) == 0 else out


def area_exact(sys: SystemMatrix, pulse: Pulse, t, alpha0: complex = 0j):
    """Exact ∫₀^t α(s) ds for exponential pulses."""
    c, nu = _exp_form(pulse)
    out = exact_area_terms(sys.lam, c, nu, t, alpha0)
    return complex(out) if np.ndim(out) == 0 else out


def exact_response_terms(lam, c, nu, t, alpha0=0j):
    """Broadcasting core of :func:`response_exact` (λ may be an array)."""
    lam = np.asarray(lam, dtype=complex)
    t = np.asarray(t, dtype=float)
    return np.exp(lam * t) * alpha0 - c * _dd_exp(nu, lam, t)


def exact_area_terms(lam, c, nu, t, alpha0=0j):
    lam = np.asarray(lam, dtype=complex)
    t = np.asarray(t, dtype=float)
    return alpha0 * _phi1(lam, t) - c * _dd_area(nu, lam, t)


def exact_trajectory(sys: SystemMatrix, pulse: Pulse, alpha0: complex, t_f: float,
                     n_out: int = 2001) -> Trajectory:
    times = np.linspace(0.0, t_f, n_out)
    return Trajectory(times, response_exact(sys, pulse, times, alpha0),
                      area_exact(sys, pulse, times, alpha0))


# truncated Fock master equation -------------------------------------------------


def _annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def coherent_dm(alpha: complex, dim: int) -> np.ndarray:
    n = np.arange(dim)
    log_fact = np.cumsum(np.log(np.maximum(n, 1)))
    amp = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * log_fact + 0j) * np.power(complex(alpha), n)
    amp /= np.linalg.norm(amp)
    return np.outer(amp, amp.conj())


@dataclass(frozen=True, eq=False)
class FockRun:
    trajectory: Trajectory
    trace_dev: float
    herm_dev: float
    min_eigenvalue: float
    max_top_population: float
    purity: np.ndarray
    rho_final: np.ndarray


def fock_oracle(sys: SystemMatrix, pulse: Pulse, dimension: int, t_f: float,
                opts: SimOptions | None = None, alpha0: complex = 0j,
                n_out: int | None = 201, guard: float = 1e-6) -> FockRun:
    """RK4 on dρ/dt = -i[H, ρ] + κ(aρa† - {a†a, ρ}/2), H = ω a†a + i(ε* a - ε a†).

    The free part is handled by an exact integrating factor, so only the
    drive and the jump term aρa† go through the Runge-Kutta stages.

    Returns ⟨a⟩(t) together with trace/Hermiticity/positivity diagnostics.
    Raises :class:`TruncationError` if the top Fock level population ever
    exceeds ``guard``.
    """
    opts = opts or SimOptions()
    if dimension < 2:
        raise ValidationError("Fock dimension must be at least 2")
    _check_pulse_span(pulse, t_f)
    dt = opts.dt if opts.dt is not None else default_dt(sys.rotation_rate, t_f)
    n_steps, stride = _step_count(t_f, dt, n_out)
    h = t_f / n_steps
    drive = sample_drive(pulse, t_f, n_steps)

    a = _annihilation(dimension)
    ad = a.conj().T
    kappa = sys.kappa
    # The diagonal part -i[(ω - iκ/2)n ρ - ρ(ω + iκ/2)n] acts elementwise,
    # ρ_mn -> ρ_mn·(-iω(m - n) - κ(m + n)/2), and is propagated exactly
    # (integrating-factor RK4, as for the amplitude equation).
    level = np.arange(dimension)
    diag_rate = (-1j * sys.rotation_rate * (level[:, None] - level[None, :])
                 - 0.5 * kappa * (level[:, None] + level[None, :]))
    e_half = np.exp(0.5 * h * diag_rate)
    e_full = e_half * e_half

    def rhs(rho, eps):
        m = (np.conj(eps) * a - eps * ad) @ rho
        return m + m.conj().T + kappa * (a @ rho @ ad)

    rho = coherent_dm(alpha0, dimension)
    n_store = n_steps // stride + 1
    expect = np.empty(n_store, dtype=complex)
    purity = np.empty(n_store)
    expect[0] = np.trace(a @ rho)
    purity[0] = np.real(np.trace(rho @ rho))
    trace_dev = abs(np.trace(rho) - 1)
    herm_dev = 0.0
    top = float(rho[-1, -1].real)
    k = 1
    for n in range(n_steps):
        d0, dm, d1 = drive[2 * n], drive[2 * n + 1], drive[2 * n + 2]
        k1 = rhs(rho, d0)
        k2 = rhs(e_half * (rho + 0.5 * h * k1), dm)
        k3 = rhs(e_half * rho + 0.5 * h * k2, dm)
        k4 = rhs(e_full * rho + h * (e_half * k3), d1)
        rho = e_full * rho + h / 6.0 * (e_full * k1 + 2.0 * e_half * (k2 + k3) + k4)
        top = max(top, float(rho[-1, -1].real))
        if top > guard:
            raise TruncationError(
                f"top Fock level population {top:.3g} exceeds {guard:g}; increase dimension"
            )
        if (n + 1) % stride == 0:
            expect[k] = np.sum(np.diagonal(rho, -1) * np.sqrt(np.arange(1, dimension)))
            purity[k] = np.real(np.vdot(rho, rho))
            trace_dev = max(trace_dev, abs(np.trace(rho) - 1))
            herm_dev = max(herm_dev, float(np.max(np.abs(rho - rho.conj().T))))
            k += 1
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    times = np.linspace(0.0, t_f, n_store)
    return FockRun(Trajectory(times, expect), float(trace_dev), herm_dev, min_eig, top,
                   purity, rho)
