"""Reference drives: Hahn sin² ramp, its counter-diabatic correction, and the
adiabatic steady state they follow."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lincontrol import SystemMatrix
from .model import SimOptions, ValidationError
from .pulses import CdOf, Hahn, Pulse


@dataclass(frozen=True)
class HahnSpec:
    omega0: float
    t_f: float

    def __post_init__(self):
        if not self.omega0 >= 0:
            raise ValidationError("omega0 must be non-negative")
        if not self.t_f > 0:
            raise ValidationError("t_f must be positive")


def hahn_pulse(hahn_spec: HahnSpec) -> Hahn:
    return Hahn(hahn_spec.omega0, hahn_spec.t_f)


def adiabatic_amplitude(sys: SystemMatrix, alpha_f_modulus: float) -> float:
    """Ω₀ = |α_f| √(ω² + κ²/4): the amplitude whose steady state has modulus |α_f|."""
    return alpha_f_modulus * math.hypot(sys.rotation_rate, 0.5 * sys.kappa)


def hahn_gain(sys: SystemMatrix, t_f: float, opts: SimOptions | None = None) -> complex:
    """α(t_f) from α(0) = 0 under a unit-amplitude Hahn ramp."""
    from .dynamics import integrate

    traj = integrate(sys, Hahn(1.0, t_f), 0j, t_f, opts)
    return complex(traj.alphas[-1])


def calibrate_hahn(sys: SystemMatrix, alpha_f_modulus: float, t_f: float,
                   opts: SimOptions | None = None) -> HahnSpec:
    """Ω₀ such that |α(t_f)| equals ``alpha_f_modulus`` exactly.

    The response is linear in Ω₀, so one unit-amplitude integration fixes it.
    """
    if alpha_f_modulus < 0:
        raise ValidationError("target modulus must be non-negative")
    gain = abs(hahn_gain(sys, t_f, opts))
    if gain < 1e-30:
        raise ValidationError("Hahn response gain vanishes; cannot calibrate")
    return HahnSpec(alpha_f_modulus / gain, t_f)


def cd_transform(base: Pulse, sys: SystemMatrix) -> CdOf:
    """ε_CD = ε - i ε̇ / (ω - iκ/2)."""
    return CdOf(base, sys.rotation_rate, sys.kappa)


def steady_state(eps, sys: SystemMatrix):
    """Fixed point α_ss = -ε / (κ/2 + iω)."""
    out = -np.asarray(eps, dtype=complex) / (0.5 * sys.kappa + 1j * sys.rotation_rate)
    return complex(out) if out.ndim == 0 else out


def steady_phase(sys: SystemMatrix) -> float:
    """Phase of the steady state for a real positive drive, π/2 + atan(κ/2ω) for ω > 0."""
    return float(np.angle(steady_state(1.0, sys)))
