"""Analytic drive envelopes ε(t).

Every pulse is a frozen value that can be evaluated at arbitrary times (scalar
or array) and serialised to ``{"variant": ..., "parameters": ...}`` JSON.
Pulses whose envelope is a single complex exponential ``c·exp(ν t)`` expose it
through :meth:`Pulse.exponential_form`, which the closed-form response in
:mod:`pulseforge.dynamics` relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ValidationError


def _lam(rotation_rate: float, kappa: float) -> complex:
    return -(0.5 * kappa + 1j * rotation_rate)


def _cplx_out(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _cplx_in(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _check_tf(t_f: float) -> None:
    if not (math.isfinite(t_f) and t_f > 0):
        raise ValidationError(f"t_f must be positive, got {t_f}")


class Pulse:
    """Base class: ``pulse(t)`` returns complex ε(t) in 1/s."""

    t_f: float

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        """dε/dt; central differences unless a subclass knows better."""
        t = np.asarray(t, dtype=float)
        h = 1e-6 * self.t_f
        return (self(t + h) - self(t - h)) / (2.0 * h)

    def exponential_form(self) -> tuple[complex, complex] | None:
        """(c, ν) with ε(t) = c·exp(ν t), or None."""
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError

    def sample(self, n: int = 2001) -> "Sampled":
        times = np.linspace(0.0, self.t_f, n)
        return Sampled(times, self(times))


@dataclass(frozen=True)
class EnergyOptimal(Pulse):
    """Minimum-energy pulse steering ``alpha0`` to ``alpha_f`` in ``t_f``.

    ε(t) = μ/W · exp(λ*(t_f - t)) with λ = -(κ/2 + iω),
    μ = exp(λ t_f) α0 - α_f and W = (1 - exp(-κ t_f))/κ.
    """

    alpha0: complex
    alpha_f: complex
    t_f: float
    rotation_rate: float
    kappa: float

    def __post_init__(self):
        _check_tf(self.t_f)
        if not self.kappa > 0:
            raise ValidationError("kappa must be positive")
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        object.__setattr__(self, "alpha_f", complex(self.alpha_f))

    @property
    def lam(self) -> complex:
        return _lam(self.rotation_rate, self.kappa)

    @property
    def coefficient(self) -> complex:
        """Amplitude at t = t_f."""
        lam = self.lam
        mu = np.exp(lam * self.t_f) * self.alpha0 - self.alpha_f
        gram = -math.expm1(-self.kappa * self.t_f) / self.kappa
        return complex(mu / gram)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.coefficient * np.exp(np.conj(self.lam) * (self.t_f - t))

    def derivative(self, t):
        return -np.conj(self.lam) * self(t)

    def exponential_form(self):
        lam_c = np.conj(self.lam)
        return self.coefficient * complex(np.exp(lam_c * self.t_f)), complex(-lam_c)

    def to_dict(self):
        return {
            "variant": "EnergyOptimal",
            "parameters": {
                "alpha0": _cplx_out(self.alpha0),
                "alpha_f": _cplx_out(self.alpha_f),
                "t_f": self.t_f,
                "rotation_rate": self.rotation_rate,
                "kappa": self.kappa,
            },
        }


@dataclass(frozen=True)
class TimeOptimal(Pulse):
    """Constant-modulus drive ε(t) = eps_max·exp(i(θ - ω t))."""

    eps_max: float
    theta: float
    rotation_rate: float
    t_f: float

    def __post_init__(self):
        _check_tf(self.t_f)
        if not self.eps_max > 0:
            raise ValidationError("eps_max must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.eps_max * np.exp(1j * (self.theta - self.rotation_rate * t))

    def derivative(self, t):
        return -1j * self.rotation_rate * self(t)

    def exponential_form(self):
        return self.eps_max * complex(np.exp(1j * self.theta)), complex(-1j * self.rotation_rate)

    def to_dict(self):
        return {
            "variant": "TimeOptimal",
            "parameters": {
                "eps_max": self.eps_max,
                "theta": self.theta,
                "rotation_rate": self.rotation_rate,
                "t_f": self.t_f,
            },
        }


@dataclass(frozen=True)
class Hahn(Pulse):
    """Real sin² ramp ε(t) = Ω₀ sin²(π t / 2 t_f)."""

    omega0: float
    t_f: float

    def __post_init__(self):
        _check_tf(self.t_f)
        if not self.omega0 >= 0:
            raise ValidationError("omega0 must be non-negative")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (self.omega0 * np.sin(0.5 * math.pi * t / self.t_f) ** 2).astype(complex)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        w = math.pi / self.t_f
        return (0.5 * self.omega0 * w * np.sin(w * t)).astype(complex)

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        w = math.pi / self.t_f
        return (0.5 * self.omega0 * w * w * np.cos(w * t)).astype(complex)

    def to_dict(self):
        return {"variant": "Hahn", "parameters": {"omega0": self.omega0, "t_f": self.t_f}}


@dataclass(frozen=True)
class Constant(Pulse):
    value: complex
    t_f: float

    def __post_init__(self):
        _check_tf(self.t_f)
        object.__setattr__(self, "value", complex(self.value))

    def __call__(self, t):
        return np.full(np.shape(t), self.value, dtype=complex)

    def derivative(self, t):
        return np.zeros(np.shape(t), dtype=complex)

    def exponential_form(self):
        return self.value, 0j

    def to_dict(self):
        return {"variant": "Constant", "parameters": {"value": _cplx_out(self.value), "t_f": self.t_f}}


@dataclass(frozen=True)
class CdOf(Pulse):
    """Counter-diabatic version of ``base``: ε - i ε̇ / (ω - iκ/2)."""

    base: Pulse
    rotation_rate: float
    kappa: float

    @property
    def t_f(self) -> float:  # type: ignore[override]
        return self.base.t_f

    @property
    def _gain(self) -> complex:
        return 1j / (self.rotation_rate - 0.5j * self.kappa)

    def __call__(self, t):
        return self.base(t) - self._gain * self.base.derivative(t)

    def correction(self, t):
        """The added orthogonal-quadrature term ε_CD - ε."""
        return -self._gain * self.base.derivative(t)

    def derivative(self, t):
        second = getattr(self.base, "second_derivative", None)
        if second is None:
            return Pulse.derivative(self, t)
        return self.base.derivative(t) - self._gain * second(t)

    def to_dict(self):
        return {
            "variant": "CdOf",
            "parameters": {
                "base": self.base.to_dict(),
                "rotation_rate": self.rotation_rate,
                "kappa": self.kappa,
            },
        }


@dataclass(frozen=True, eq=False)
class Sampled(Pulse):
    """Externally supplied samples, linearly interpolated."""

    times: np.ndarray
    values: np.ndarray
    _deriv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValidationError("Sampled needs ≥ 2 matching time/value samples")
        if not np.all(np.diff(times) > 0):
            raise ValidationError("sample times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValidationError("sampled pulse contains non-finite values")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_deriv", np.gradient(values, times))

    @property
    def t_f(self) -> float:  # type: ignore[override]
        return float(self.times[-1])

    def _interp(self, t, y):
        t = np.asarray(t, dtype=float)
        span = self.times[-1] - self.times[0]
        tol = 1e-9 * span
        if np.any(t < self.times[0] - tol) or np.any(t > self.times[-1] + tol):
            raise ValidationError("sampled pulse evaluated outside its time grid")
        return np.interp(t, self.times, y.real) + 1j * np.interp(t, self.times, y.imag)

    def __call__(self, t):
        return self._interp(t, self.values)

    def derivative(self, t):
        return self._interp(t, self._deriv)

    def to_dict(self):
        return {
            "variant": "Sampled",
            "parameters": {
                "times": self.times.tolist(),
                "re": self.values.real.tolist(),
                "im": self.values.imag.tolist(),
            },
        }


def pulse_from_dict(data: dict) -> Pulse:
    """Inverse of ``Pulse.to_dict``."""
    try:
        variant = data["variant"]
        p = data["parameters"]
        if variant == "EnergyOptimal":
            return EnergyOptimal(_cplx_in(p["alpha0"]), _cplx_in(p["alpha_f"]), p["t_f"],
                                 p["rotation_rate"], p["kappa"])
        if variant == "TimeOptimal":
            return TimeOptimal(p["eps_max"], p["theta"], p["rotation_rate"], p["t_f"])
        if variant == "Hahn":
            return Hahn(p["omega0"], p["t_f"])
        if variant == "Constant":
            return Constant(_cplx_in(p["value"]), p["t_f"])
        if variant == "CdOf":
            return CdOf(pulse_from_dict(p["base"]), p["rotation_rate"], p["kappa"])
        if variant == "Sampled":
            values = np.asarray(p["re"]) + 1j * np.asarray(p["im"])
            return Sampled(np.asarray(p["times"]), values)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed pulse description: {exc}") from exc
    raise ValidationError(f"unknown pulse variant {variant!r}")
