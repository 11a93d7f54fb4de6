"""Minimum-time steering under |ε(t)| ≤ ε_max.

With ε = ε_max·exp(iφ(t)), maximising the control Hamiltonian aligns the
drive with the costate, whose phase turns at -ω. The amplitude under the
drive φ(t) = -ωt + θ is

    α(t) = e^{λt} α0 - (2 ε_max/κ) e^{i(θ - ωt)} (1 - e^{-κt/2}),

so at each t the reachable set is a disc of radius R(t) = (2ε_max/κ)(1 - e^{-κt/2})
centred on the free evolution e^{λt}α0, and the optimal time is the first t at
which the target enters that disc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .lincontrol import SystemMatrix
from .model import ValidationError
from .pulses import TimeOptimal


class UnreachableTarget(ValueError):
    """The drive bound is too weak to reach the target against decay."""


@dataclass(frozen=True)
class TimeOptimalSolution:
    t_f_min: float
    theta: float
    eps_max: float
    reachable: bool
    rotation_rate: float = 0.0
    kappa: float = 0.0


def optimal_phase(sys: SystemMatrix, theta: float, t):
    """φ(t) = -ω t + θ (κ-independent)."""
    out = theta - sys.rotation_rate * np.asarray(t, dtype=float)
    return float(out) if np.ndim(out) == 0 else out


def reach_radius(sys: SystemMatrix, eps_max: float, t):
    return 2.0 * eps_max / sys.kappa * -np.expm1(-0.5 * sys.kappa * np.asarray(t, dtype=float))


def _phase_for(sys: SystemMatrix, t: float, offset: complex) -> float:
    # -R e^{i(θ - ωt)} = offset  =>  θ = arg(offset) + π + ωt
    return float(np.mod(np.angle(offset) + math.pi + sys.rotation_rate * t, 2.0 * math.pi))


def min_time(sys: SystemMatrix, alpha0: complex, alpha_f: complex, eps_max: float,
             horizon: float | None = None, max_grid: int = 4_000_000) -> TimeOptimalSolution:
    """Minimal steering time and drive phase offset.

    For ``alpha0 == 0`` the closed form
    ``t = -(2/κ) ln(1 - κ|α_f| / (2 ε_max))`` is used. Otherwise the first
    root of ``|α_f - e^{λt}α0| - R(t)`` is bracketed on a grid up to
    ``horizon`` (default 40/κ) and refined with Brent's method.
    An unreachable target yields ``reachable=False`` (t_f_min = inf).
    """
    if not eps_max > 0:
        raise ValidationError("eps_max must be positive")
    alpha0 = complex(alpha0)
    alpha_f = complex(alpha_f)
    kappa = sys.kappa
    unreachable = TimeOptimalSolution(math.inf, 0.0, eps_max, False, sys.rotation_rate, kappa)

    if alpha0 == 0:
        ratio = kappa * abs(alpha_f) / (2.0 * eps_max)
        if ratio >= 1.0:
            return unreachable
        if alpha_f == 0:
            raise ValidationError("target equals the initial state")
        t = -2.0 / kappa * math.log1p(-ratio)
        return TimeOptimalSolution(t, _phase_for(sys, t, alpha_f), eps_max, True,
                                   sys.rotation_rate, kappa)

    if alpha_f == alpha0:
        raise ValidationError("target equals the initial state")
    lam = sys.lam

    def gap(t):
        return np.abs(alpha_f - np.exp(lam * t) * alpha0) - reach_radius(sys, eps_max, t)

    horizon = 40.0 / kappa if horizon is None else horizon
    step = horizon / 20000
    if sys.rotation_rate != 0:
        step = min(step, math.pi / (8.0 * abs(sys.rotation_rate)))
    n = min(max_grid, int(math.ceil(horizon / step)))
    grid = np.union1d(np.linspace(0.0, horizon, n + 1), np.geomspace(horizon * 1e-12, horizon, 2000))
    values = gap(grid)
    hits = np.flatnonzero(values <= 0)
    if hits.size == 0:
        return unreachable
    i = int(hits[0])
    if values[i] == 0:
        t = float(grid[i])
    else:
        t = brentq(gap, grid[i - 1], grid[i], xtol=1e-15 * grid[i], rtol=4 * np.finfo(float).eps)
    offset = alpha_f - np.exp(lam * t) * alpha0
    return TimeOptimalSolution(t, _phase_for(sys, t, offset), eps_max, True,
                               sys.rotation_rate, kappa)


def synth_time_optimal(sol: TimeOptimalSolution, sys: SystemMatrix) -> TimeOptimal:
    if not sol.reachable:
        raise UnreachableTarget(
            f"target not reachable with eps_max = {sol.eps_max:g} 1/s at kappa = {sys.kappa:g} 1/s"
        )
    return TimeOptimal(sol.eps_max, sol.theta, sys.rotation_rate, sol.t_f_min)


def eps_max_for_time(sys: SystemMatrix, alpha_f_modulus: float, t_f: float) -> float:
    """Drive bound whose minimal time from α0 = 0 equals ``t_f``."""
    return sys.kappa * alpha_f_modulus / (2.0 * -math.expm1(-0.5 * sys.kappa * t_f))
