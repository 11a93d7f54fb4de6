"""Minimum-energy steering of the damped rotating amplitude.

The two-quadrature system ẋ = A x + B u with

    A = [[-κ/2,  ω],      B = -I
         [ -ω, -κ/2]],

is handled as the complex scalar α̇ = λ α - ε with λ = -(κ/2 + iω). Its
controllability Gramian is a multiple of the identity, W·I, which makes the
minimum-norm control a single damped phasor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DispersiveParams, SystemParams, ValidationError
from .pulses import CdOf, Constant, EnergyOptimal, Hahn, Pulse, TimeOptimal


@dataclass(frozen=True)
class SystemMatrix:
    """Rotation rate (ω_r, or ±χ for readout) and decay κ."""

    rotation_rate: float
    kappa: float

    def __post_init__(self):
        if not (math.isfinite(self.rotation_rate) and math.isfinite(self.kappa)):
            raise ValidationError("system parameters must be finite")
        if not self.kappa > 0:
            raise ValidationError("kappa must be positive (eigenvalue real part -κ/2 < 0)")

    @classmethod
    def from_params(cls, params: SystemParams | DispersiveParams, sign: int = +1):
        """Resonator system, or the qubit-conditioned one (rate = sign·χ)."""
        if isinstance(params, DispersiveParams):
            return cls(sign * params.chi, params.kappa)
        return cls(params.omega_r, params.kappa)

    @property
    def lam(self) -> complex:
        return -(0.5 * self.kappa + 1j * self.rotation_rate)

    @property
    def a_matrix(self) -> np.ndarray:
        k, w = 0.5 * self.kappa, self.rotation_rate
        return np.array([[-k, w], [-w, -k]])

    @property
    def b_matrix(self) -> np.ndarray:
        return -np.eye(2)


@dataclass(frozen=True)
class CostReport:
    j_e: float
    t_f: float
    target_residual: float = float("nan")


def propagator(sys: SystemMatrix, t):
    """exp(λ t): the undriven evolution factor for α."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError("propagator requires t >= 0")
    out = np.exp(sys.lam * t)
    return complex(out) if out.ndim == 0 else out


def gramian(sys: SystemMatrix, t_f: float) -> float:
    """Scalar W with ∫₀^t_f e^{A s} B Bᵀ e^{Aᵀ s} ds = W·I, W = (1 - e^{-κ t_f})/κ."""
    if not t_f > 0:
        raise ValidationError("gramian requires t_f > 0")
    return -math.expm1(-sys.kappa * t_f) / sys.kappa


def synth_energy_optimal(sys: SystemMatrix, alpha0: complex, alpha_f: complex,
                         t_f: float) -> EnergyOptimal:
    """Minimum ∫|ε|² dt pulse taking α(0) = alpha0 to α(t_f) = alpha_f."""
    if not t_f > 0:
        raise ValidationError("t_f must be positive")
    return EnergyOptimal(alpha0, alpha_f, t_f, sys.rotation_rate, sys.kappa)


def optimal_energy(sys: SystemMatrix, alpha0: complex, alpha_f: complex, t_f: float) -> float:
    """Closed-form minimum cost κ|α_f - e^{λ t_f} α0|² / (1 - e^{-κ t_f})."""
    mu = propagator(sys, t_f) * complex(alpha0) - complex(alpha_f)
    return abs(mu) ** 2 / gramian(sys, t_f)


@dataclass(frozen=True)
class AdjointState:
    """Costate p = p₁ + i p₂ of the control Hamiltonian.

    ṗ = -Aᵀ p reads ṗ = (κ/2 - iω) p in complex form, so
    p(t) = p(0)·exp((κ/2 - iω) t) and |p|² e^{-κt} is conserved.
    """

    p: complex
    t: float = 0.0

    def at(self, sys: SystemMatrix, t):
        rate = 0.5 * sys.kappa - 1j * sys.rotation_rate
        return self.p * np.exp(rate * (np.asarray(t, dtype=float) - self.t))


def simpson(f, a: float, b: float, n: int) -> float:
    """Composite Simpson rule with n (even) intervals; f is vectorised."""
    x = np.linspace(a, b, n + 1)
    y = f(x)
    h = (b - a) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def integrate_richardson(f, a: float, b: float, rel_tol: float = 1e-9,
                         n0: int = 64, max_n: int = 1 << 22) -> float:
    """Simpson on doubling grids with Richardson extrapolation until converged."""
    n = n0
    prev = simpson(f, a, b, n)
    prev_extrap = None
    while n < max_n:
        n *= 2
        cur = simpson(f, a, b, n)
        extrap = cur + (cur - prev) / 15.0
        if prev_extrap is not None and abs(extrap - prev_extrap) <= rel_tol * abs(extrap):
            return float(extrap)
        prev, prev_extrap = cur, extrap
    return float(prev_extrap)


def energy_cost(pulse: Pulse, t_f: float | None = None, *, sys: SystemMatrix | None = None,
                alpha0: complex = 0j, target: complex | None = None,
                rel_tol: float = 1e-9, closed_form: bool = True) -> CostReport:
    """J_E = ∫₀^t_f |ε(t)|² dt.

    Closed forms are used for EnergyOptimal, TimeOptimal, Hahn and Constant
    pulses; everything else goes through Richardson-refined Simpson
    quadrature. With ``sys`` and ``target`` given, ``target_residual`` is the
    relative miss |α(t_f) - target| / max(|target|, 1) from the exact response.
    """
    if t_f is None:
        t_f = pulse.t_f
    if not t_f > 0:
        raise ValidationError("t_f must be positive")
    if pulse.t_f < t_f * (1 - 1e-12):
        raise ValidationError(f"pulse lasts {pulse.t_f} s, shorter than t_f = {t_f} s")

    j_e = None
    if closed_form:
        j_e = _closed_form_cost(pulse, t_f)
    if j_e is None:
        j_e = integrate_richardson(lambda t: np.abs(pulse(t)) ** 2, 0.0, t_f, rel_tol)

    residual = float("nan")
    if sys is not None and target is not None:
        from .dynamics import response_exact

        reached = response_exact(sys, pulse, t_f, alpha0)
        residual = abs(reached - complex(target)) / max(abs(complex(target)), 1.0)
    return CostReport(float(j_e), float(t_f), float(residual))


def _closed_form_cost(pulse: Pulse, t_f: float) -> float | None:
    if isinstance(pulse, EnergyOptimal):
        # |ε(t)|² = |c|² e^{-κ (t_f' - t)}, integrated over [0, t_f]
        c2 = abs(pulse.coefficient) ** 2
        k = pulse.kappa
        return c2 * math.exp(-k * (pulse.t_f - t_f)) * (-math.expm1(-k * t_f)) / k
    if isinstance(pulse, TimeOptimal):
        return pulse.eps_max**2 * t_f
    if isinstance(pulse, Constant):
        return abs(pulse.value) ** 2 * t_f
    if isinstance(pulse, Hahn) and t_f == pulse.t_f:
        return 0.375 * pulse.omega0**2 * t_f
    return None


def cd_excess_energy(pulse: CdOf, t_f: float | None = None, rel_tol: float = 1e-10) -> float:
    """J_CD - J_base for a real, monotone base ramp from 0 to Ω₀.

    |ε - ε̇/λ|² = ε² + |ε̇|²/|λ|² + κ ε ε̇ / |λ|², and ∫ ε ε̇ = Ω₀²/2.
    """
    t_f = pulse.t_f if t_f is None else t_f
    lam2 = pulse.rotation_rate**2 + 0.25 * pulse.kappa**2
    deriv_sq = integrate_richardson(lambda t: np.abs(pulse.base.derivative(t)) ** 2, 0.0, t_f, rel_tol)
    end = float(np.real(pulse.base(t_f)))
    start = float(np.real(pulse.base(0.0)))
    return deriv_sq / lam2 + 0.5 * pulse.kappa * (end**2 - start**2) / lam2
