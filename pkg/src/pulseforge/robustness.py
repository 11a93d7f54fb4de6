"""Monte Carlo SNR statistics under frequency mismatch.

The pulse stays the one designed for the nominal parameters. At each sweep
point the swept frequency is scaled by (1 + δ); the other frequency is drawn
uniformly within ±``width`` (relative) per sample. In the frame of the nominal
drive a resonator shift appears as an extra detuning ω_r' - ω_r, and both
shifts change the dispersive rate χ' = g² / (ω_q' - ω_r').
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import exact_area_terms, integrate_final_batch
from .model import DispersiveParams, SimOptions, ValidationError
from .pulses import Pulse
from .readout import snr_from_signal

AXES = ("resonator", "qubit")


@dataclass(frozen=True, eq=False)
class McStats:
    sweep_axis: np.ndarray
    mean_snr: np.ndarray
    var_snr: np.ndarray
    samples: int
    seed: int
    axis: str
    width: float

    def __eq__(self, other):
        if not isinstance(other, McStats):
            return NotImplemented
        return (
            self.samples == other.samples and self.seed == other.seed
            and self.axis == other.axis and self.width == other.width
            and np.array_equal(self.sweep_axis, other.sweep_axis)
            and np.array_equal(self.mean_snr, other.mean_snr)
            and np.array_equal(self.var_snr, other.var_snr)
        )


def perturbed_rates(params: DispersiveParams, axis: str, delta: float, other) -> tuple:
    """Rotation rates (|e⟩, |g⟩) in the nominal drive frame."""
    other = np.asarray(other, dtype=float)
    if axis == "resonator":
        omega_r = params.omega_r * (1.0 + delta)
        omega_q = params.omega_q * (1.0 + other)
    else:
        omega_q = params.omega_q * (1.0 + delta)
        omega_r = params.omega_r * (1.0 + other)
    chi = params.g**2 / (omega_q - omega_r)
    shift = omega_r - params.omega_r
    return shift + chi, shift - chi


def snr_at_end(params: DispersiveParams, pulse: Pulse, rate_e, rate_g, lo_angle: float = 0.0,
               opts: SimOptions | None = None) -> np.ndarray:
    """SNR(τ = t_f) for arrays of state-conditioned rates."""
    opts = opts or SimOptions()
    t_f = pulse.t_f
    kappa = params.kappa
    rate_e = np.atleast_1d(np.asarray(rate_e, dtype=float))
    rate_g = np.atleast_1d(np.asarray(rate_g, dtype=float))
    form = pulse.exponential_form()
    if opts.kerr_k == 0 and form is not None:
        c, nu = form
        area_e = exact_area_terms(-(0.5 * kappa + 1j * rate_e), c, nu, t_f)
        area_g = exact_area_terms(-(0.5 * kappa + 1j * rate_g), c, nu, t_f)
    else:
        _, areas = integrate_final_batch(np.concatenate([rate_e, rate_g]), kappa, pulse, 0j,
                                         t_f, opts)
        area_e, area_g = areas[: rate_e.size], areas[rate_e.size:]
    signal = 2.0 * kappa * np.real((area_e - area_g) * np.exp(-1j * lo_angle))
    return snr_from_signal(signal, kappa, t_f)


def _point(args):
    params, pulse, axis, j, delta, samples, seed, width, lo_angle, opts = args
    rng = np.random.default_rng([seed, j])
    other = rng.uniform(-width, width, samples) if width > 0 else np.zeros(samples)
    rate_e, rate_g = perturbed_rates(params, axis, delta, other)
    values = snr_at_end(params, pulse, rate_e, rate_g, lo_angle, opts)
    # shifted variance: exact zero when every sample agrees
    return float(np.mean(values)), float(np.var(values - values[0]))


def mc_snr(params: DispersiveParams, pulse: Pulse, axis: str, grid, samples: int = 1000,
           seed: int = 0, width: float = 0.2, lo_angle: float = 0.0,
           opts: SimOptions | None = None, workers: int = 1) -> McStats:
    """Mean and variance of SNR(t_f) along a relative-mismatch sweep.

    Sweep point ``j`` draws its samples from the stream ``(seed, j)``, so the
    result is identical for any ``workers`` count.
    """
    if axis not in AXES:
        raise ValidationError(f"axis must be one of {AXES}, got {axis!r}")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError("mismatch grid must be a non-empty 1-D sequence")
    if np.any(np.abs(grid) > 0.2 + 1e-12):
        raise ValidationError("mismatch grid must lie within ±0.2")
    if not 1 <= samples <= 10_000:
        raise ValidationError("samples must be between 1 and 10^4")
    if not 0 <= width < 1:
        raise ValidationError("width must be in [0, 1)")
    jobs = [(params, pulse, axis, j, float(d), samples, seed, width, lo_angle, opts)
            for j, d in enumerate(grid)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_point, jobs))
    else:
        results = [_point(job) for job in jobs]
    mean = np.array([r[0] for r in results])
    var = np.array([r[1] for r in results])
    return McStats(grid, mean, var, samples, seed, axis, width)


def parse_grid(text: str) -> np.ndarray:
    """``"start:stop:count"`` or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid {text!r} must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValidationError("grid count must be positive")
        return np.linspace(start, stop, count)
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise ValidationError(f"bad grid {text!r}") from exc


def relative_degradation(stats: McStats) -> float:
    """1 - min(mean SNR at the sweep ends) / mean SNR at the point nearest 0."""
    centre = stats.mean_snr[int(np.argmin(np.abs(stats.sweep_axis)))]
    ends = min(stats.mean_snr[0], stats.mean_snr[-1])
    return float(1.0 - ends / centre) if centre > 0 else math.nan
