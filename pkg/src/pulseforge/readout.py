"""Dispersive qubit readout through the resonator.

The qubit state shifts the resonator rotation rate to ±χ; the same drive is
applied for both states and the homodyne signal separates them. For coherent
states with vacuum input noise the signal-to-noise ratio after integrating
for τ is

    SNR(τ) = 2κ |∫₀^τ Re[(α_e - α_g) e^{-iφ}] dt| / √(2κτ).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .baselines import steady_phase
from .dynamics import exact_trajectory, integrate
from .lincontrol import SystemMatrix, synth_energy_optimal
from .model import TWO_PI, DispersiveParams, SimOptions, Trajectory, ValidationError
from .pulses import EnergyOptimal, Pulse

DEFAULT_OMEGA_R = TWO_PI * 6e9
DEFAULT_OMEGA_Q = TWO_PI * 4e9
DEFAULT_KAPPA = TWO_PI * 1e4


class DispersiveWarning(UserWarning):
    """Photon number well above n_crit: dispersive approximation is doubtful."""


def dispersive_config(n_crit: float, omega_r: float = DEFAULT_OMEGA_R,
                      omega_q: float = DEFAULT_OMEGA_Q, kappa: float = DEFAULT_KAPPA) -> DispersiveParams:
    """Parameters with g chosen so that (ω_q - ω_r)²/4g² equals ``n_crit``."""
    if not n_crit > 0:
        raise ValidationError("n_crit must be positive")
    g = abs(omega_q - omega_r) / (2.0 * math.sqrt(n_crit))
    return DispersiveParams(omega_r, omega_q, g, kappa)


def readout_pulse(params: DispersiveParams, t_f: float, n_target: float | None = None,
                  design_sign: int = +1) -> EnergyOptimal:
    """Energy-optimal pulse ramping the design state (rate = sign·χ) to ⟨N⟩ = n_target.

    The target phase is the steady-state phase of the design system.
    """
    sys = SystemMatrix.from_params(params, design_sign)
    n_target = params.n_crit if n_target is None else n_target
    target = math.sqrt(n_target) * np.exp(1j * steady_phase(sys))
    return synth_energy_optimal(sys, 0j, target, t_f)


@dataclass(frozen=True, eq=False)
class ReadoutResult:
    traj_e: Trajectory
    traj_g: Trajectory
    chi: float
    kappa: float
    n_crit: float
    max_photon: float

    @property
    def times(self) -> np.ndarray:
        return self.traj_e.times

    @property
    def photon_warning(self) -> bool:
        return self.max_photon > 1.1 * self.n_crit

    def iq_normalized(self) -> dict[str, np.ndarray]:
        """I/Q of both states scaled by the largest √(I² + Q²) over both."""
        scale = max(np.max(np.abs(self.traj_e.alphas)), np.max(np.abs(self.traj_g.alphas)))
        scale = scale if scale > 0 else 1.0
        e = self.traj_e.alphas / scale
        g = self.traj_g.alphas / scale
        return {"t_s": self.times, "i_norm_e": e.real, "q_norm_e": e.imag,
                "i_norm_g": g.real, "q_norm_g": g.imag}


def _trajectory(sys: SystemMatrix, pulse: Pulse, opts: SimOptions, n_out: int) -> Trajectory:
    if opts.kerr_k == 0 and pulse.exponential_form() is not None:
        return exact_trajectory(sys, pulse, 0j, pulse.t_f, n_out)
    return integrate(sys, pulse, 0j, pulse.t_f, opts, n_out=n_out)


def readout_trajectories(params: DispersiveParams, pulse: Pulse, opts: SimOptions | None = None,
                         n_out: int = 2001) -> ReadoutResult:
    """Evolve |e⟩ (rate +χ) and |g⟩ (rate -χ) from vacuum under the same drive.

    Exponential pulses without Kerr use the closed-form response; otherwise
    the RK4 integrator runs with ``opts``.
    """
    opts = opts or SimOptions()
    kappa = params.kappa
    traj_e = _trajectory(SystemMatrix(params.chi, kappa), pulse, opts, n_out)
    traj_g = _trajectory(SystemMatrix(-params.chi, kappa), pulse, opts, n_out)
    max_photon = float(max(traj_e.photon.max(), traj_g.photon.max()))
    result = ReadoutResult(traj_e, traj_g, params.chi, kappa, params.n_crit, max_photon)
    if result.photon_warning:
        warnings.warn(
            f"max photon number {max_photon:.3g} exceeds n_crit = {params.n_crit:.3g} by more than 10%",
            DispersiveWarning, stacklevel=2,
        )
    return result


def signal_difference(result: ReadoutResult, lo_angle: float = 0.0) -> np.ndarray:
    """⟨M_e⟩ - ⟨M_g⟩ = 2κ ∫₀^τ Re[(α_e - α_g) e^{-iφ}] dt on the result grid."""
    if result.traj_e.area is None or result.traj_g.area is None:
        raise ValidationError("trajectories carry no running area")
    diff = result.traj_e.area - result.traj_g.area
    return 2.0 * result.kappa * np.real(diff * np.exp(-1j * lo_angle))


def snr_from_signal(signal, kappa: float, tau):
    tau = np.asarray(tau, dtype=float)
    noise = np.sqrt(2.0 * kappa * tau)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(tau > 0, np.abs(signal) / np.where(tau > 0, noise, 1.0), 0.0)
    return out


def snr(result: ReadoutResult, lo_angle: float = 0.0) -> np.ndarray:
    """SNR(τ) on the result's time grid (SNR(0) = 0)."""
    return snr_from_signal(signal_difference(result, lo_angle), result.kappa, result.times)


def lo_sweep(result: ReadoutResult, angles) -> np.ndarray:
    """SNR at τ = t_f for each local-oscillator angle."""
    angles = np.asarray(angles, dtype=float)
    if angles.size == 0:
        raise ValidationError("empty angle grid")
    diff = result.traj_e.area[-1] - result.traj_g.area[-1]
    signal = 2.0 * result.kappa * np.real(diff * np.exp(-1j * angles))
    return snr_from_signal(signal, result.kappa, np.full(angles.shape, result.times[-1]))


@dataclass(frozen=True, eq=False)
class HomodyneRecords:
    times: np.ndarray
    signal: np.ndarray   # |mean_e - mean_g| of the integrated records
    noise: np.ndarray    # sqrt(var_e + var_g)
    snr: np.ndarray
    shots: int
    seed: int


def simulate_homodyne_records(result: ReadoutResult, lo_angle: float, shots: int, seed: int,
                              noise_scale: float = 1.0, n_bins: int | None = None) -> HomodyneRecords:
    """Monte Carlo integrated homodyne records for both qubit states.

    Each record is the deterministic signal 2κ∫Re[α e^{-iφ}]dt plus a Wiener
    process of variance κτ (vacuum input noise). Shot ``s`` draws from the
    stream ``(seed, s)`` so records do not depend on evaluation order.
    ``noise_scale = 0`` switches the noise off for testing.
    """
    if shots < 1:
        raise ValidationError("shots must be positive")
    times = result.times
    idx = np.arange(times.size)
    if n_bins is not None and n_bins + 1 < times.size:
        idx = np.unique(np.round(np.linspace(0, times.size - 1, n_bins + 1)).astype(int))
    tau = times[idx]
    rot = np.exp(-1j * lo_angle)
    kappa = result.kappa
    mean_e = 2.0 * kappa * np.real(result.traj_e.area[idx] * rot)
    mean_g = 2.0 * kappa * np.real(result.traj_g.area[idx] * rot)
    step_sd = noise_scale * np.sqrt(kappa * np.diff(tau))

    # Welford running mean/variance: exact zero variance for identical records
    mean = np.zeros((2, tau.size))
    m2 = np.zeros((2, tau.size))
    deterministic = np.stack([mean_e, mean_g])
    for s in range(shots):
        rng = np.random.default_rng([seed, s])
        inc = rng.standard_normal((2, tau.size - 1)) * step_sd
        rec = deterministic.copy()
        rec[:, 1:] += np.cumsum(inc, axis=1)
        delta = rec - mean
        mean += delta / (s + 1)
        m2 += delta * (rec - mean)
    var = m2 / max(shots - 1, 1)
    signal = np.abs(mean[0] - mean[1])
    noise = np.sqrt(var[0] + var[1])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(noise > 0, signal / np.where(noise > 0, noise, 1.0), 0.0)
    return HomodyneRecords(tau, signal, noise, ratio, shots, seed)
