"""Speed-limit figures of merit for coherent-state transfers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .lincontrol import SystemMatrix
from .model import Trajectory, ValidationError
from .pulses import Pulse


@dataclass(frozen=True)
class EfficiencyReport:
    s0: float
    mt_integral: float
    eta: float
    eta_bound: float


def geodesic_s0(alpha0: complex, alpha_f: complex) -> float:
    """arccos |⟨α0|α_f⟩| = arccos exp(-|α_f - α0|²/2)."""
    d2 = abs(complex(alpha_f) - complex(alpha0)) ** 2
    return math.acos(math.exp(-0.5 * d2))


def efficiency_bound(alpha0: complex, alpha_f: complex) -> float:
    dist = abs(complex(alpha_f) - complex(alpha0))
    if dist == 0:
        raise ValidationError("coincident endpoints: efficiency undefined")
    return geodesic_s0(alpha0, alpha_f) / dist


def velocity(traj: Trajectory, sys: SystemMatrix | None = None, pulse: Pulse | None = None,
             kerr_k: float = 0.0) -> np.ndarray:
    """α̇ on the trajectory grid.

    Uses the equation of motion when ``sys`` and ``pulse`` are supplied,
    second-order finite differences otherwise.
    """
    a = traj.alphas
    if sys is not None and pulse is not None:
        return (sys.lam - 1j * kerr_k * np.abs(a) ** 2) * a - pulse(traj.times)
    return np.gradient(a, traj.times, edge_order=2)


def efficiency(traj: Trajectory, sys: SystemMatrix | None = None, pulse: Pulse | None = None,
               kerr_k: float = 0.0) -> EfficiencyReport:
    """η = S₀ / ∫|α̇| dt together with its bound S₀ / |Δα|.

    ∫|α̇| dt is the path length of the trajectory in the phase plane, so η is
    invariant under monotone time reparameterisation and η ≤ bound.
    """
    if len(traj) < 3:
        raise ValidationError("efficiency needs at least 3 trajectory points")
    a0, af = traj.alphas[0], traj.alphas[-1]
    bound = efficiency_bound(a0, af)
    s0 = geodesic_s0(a0, af)
    speed = np.abs(velocity(traj, sys, pulse, kerr_k))
    mt = float(simpson(speed, x=traj.times))
    return EfficiencyReport(s0, mt, s0 / mt, bound)
