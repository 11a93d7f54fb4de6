"""Dataset pipelines for the standard figure panels.

Each pipeline writes CSV files into ``out_dir`` and returns their paths. Data
only: plotting is left to external tools.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .baselines import adiabatic_amplitude, calibrate_hahn, cd_transform, steady_phase
from .dynamics import integrate
from .lincontrol import SystemMatrix, energy_cost, synth_energy_optimal
from .metrics import efficiency
from .model import TWO_PI, DispersiveParams, SystemParams, ValidationError, write_csv
from .pulses import Hahn
from .readout import dispersive_config, readout_pulse, readout_trajectories, snr
from .robustness import mc_snr
from .timeoptimal import eps_max_for_time, min_time, synth_time_optimal

FIGURES = ("fig2a", "fig2b", "fig3a", "fig3b", "figIQ", "figSNR", "figRob")
DEFAULT_RESONATOR = SystemParams(TWO_PI * 0.3e6, TWO_PI * 1e4)
TARGET_MODULUS = 10.0
READOUT_NCRIT = (1, 10, 100)
READOUT_TF = 10e-6


def _target(sys: SystemMatrix) -> complex:
    return TARGET_MODULUS * np.exp(1j * steady_phase(sys))


def tf_grid(n: int = 30) -> np.ndarray:
    return np.geomspace(1e-6, 100e-6, n)


def fig2a(params: SystemParams, out_dir: Path, **_) -> list[Path]:
    sys = SystemMatrix.from_params(params)
    target = _target(sys)
    rows = {"t_f_s": [], "j_opt": [], "j_hahn": [], "j_cd": []}
    omega0 = adiabatic_amplitude(sys, TARGET_MODULUS)
    for t_f in tf_grid():
        rows["t_f_s"].append(t_f)
        rows["j_opt"].append(energy_cost(synth_energy_optimal(sys, 0j, target, t_f)).j_e)
        hahn_spec = calibrate_hahn(sys, TARGET_MODULUS, t_f)
        rows["j_hahn"].append(energy_cost(Hahn(hahn_spec.omega0, t_f)).j_e)
        rows["j_cd"].append(energy_cost(cd_transform(Hahn(omega0, t_f), sys)).j_e)
    path = out_dir / "fig2a_energy_cost.csv"
    write_csv(path, {k: np.array(v) for k, v in rows.items()},
              "energy cost J_E(t_f) = integral |eps|^2 dt for 0 -> 10 e^{i vartheta}\n"
              "j_opt: lincontrol.synth_energy_optimal + energy_cost (Gramian minimum-norm pulse)\n"
              "j_hahn: baselines.calibrate_hahn (sin^2 ramp, exact-gain amplitude)\n"
              "j_cd: baselines.cd_transform of the sin^2 ramp with adiabatic amplitude")
    return [path]


def fig2b(params: SystemParams, out_dir: Path, t_f: float = 10e-6, **_) -> list[Path]:
    sys = SystemMatrix.from_params(params)
    target = _target(sys)
    n_out = 2001
    opt = integrate(sys, synth_energy_optimal(sys, 0j, target, t_f), 0j, t_f, n_out=n_out)
    hahn_spec = calibrate_hahn(sys, TARGET_MODULUS, t_f)
    hahn = integrate(sys, Hahn(hahn_spec.omega0, t_f), 0j, t_f, n_out=n_out)
    cd = integrate(sys, cd_transform(Hahn(adiabatic_amplitude(sys, TARGET_MODULUS), t_f), sys),
                   0j, t_f, n_out=n_out)
    path = out_dir / "fig2b_photon_number.csv"
    write_csv(path, {"t_s": opt.times, "n_opt": opt.photon, "n_hahn": hahn.photon,
                     "n_cd": cd.photon},
              f"photon number |alpha(t)|^2, t_f = {t_f:g} s\n"
              "dynamics.integrate (integrating-factor RK4 of the damped driven amplitude)")
    return [path]


def fig3a(params: SystemParams, out_dir: Path, **_) -> list[Path]:
    sys = SystemMatrix.from_params(params)
    target = _target(sys)
    threshold = sys.kappa * TARGET_MODULUS / 2.0
    eps = np.unique(np.concatenate([np.geomspace(1.05 * threshold, 1e8, 40), [1e7]]))
    t_min = np.array([min_time(sys, 0j, target, e).t_f_min for e in eps])
    path = out_dir / "fig3a_min_time.csv"
    write_csv(path, {"inv_eps_max_s": 1.0 / eps, "eps_max": eps, "t_f_min_s": t_min},
              "timeoptimal.min_time: first time the reachable disc of radius\n"
              "(2 eps_max/kappa)(1 - exp(-kappa t/2)) contains the target; eps_max in 1/s")
    return [path]


def fig3b(params: SystemParams, out_dir: Path, **_) -> list[Path]:
    sys = SystemMatrix.from_params(params)
    target = _target(sys)
    rows = {"t_f_s": [], "eta_opt": [], "eta_time": [], "eta_cd": [], "eta_bound": []}
    omega0 = adiabatic_amplitude(sys, TARGET_MODULUS)
    for t_f in tf_grid():
        pulse = synth_energy_optimal(sys, 0j, target, t_f)
        rep = efficiency(integrate(sys, pulse, 0j, t_f), sys, pulse)
        sol = min_time(sys, 0j, target, eps_max_for_time(sys, TARGET_MODULUS, t_f))
        tpulse = synth_time_optimal(sol, sys)
        rep_t = efficiency(integrate(sys, tpulse, 0j, sol.t_f_min), sys, tpulse)
        cd = cd_transform(Hahn(omega0, t_f), sys)
        rep_cd = efficiency(integrate(sys, cd, 0j, t_f), sys, cd)
        for key, val in (("t_f_s", t_f), ("eta_opt", rep.eta), ("eta_time", rep_t.eta),
                         ("eta_cd", rep_cd.eta), ("eta_bound", rep.eta_bound)):
            rows[key].append(val)
    path = out_dir / "fig3b_efficiency.csv"
    write_csv(path, {k: np.array(v) for k, v in rows.items()},
              "metrics.efficiency: eta = arccos(exp(-|d alpha|^2/2)) / integral |d alpha/dt| dt\n"
              "time-optimal column uses the eps_max whose minimal time equals t_f")
    return [path]


def _readout_results(t_f: float):
    out = {}
    for n in READOUT_NCRIT:
        params = dispersive_config(n)
        out[n] = readout_trajectories(params, readout_pulse(params, t_f))
    return out


def fig_iq(params, out_dir: Path, t_f: float = READOUT_TF, **_) -> list[Path]:
    paths = []
    for n, res in _readout_results(t_f).items():
        path = out_dir / f"figIQ_ncrit{n}.csv"
        write_csv(path, res.iq_normalized(),
                  f"readout.readout_trajectories, n_crit = {n}, energy-optimal pulse for +chi\n"
                  "IQ of |e> and |g> normalised by the largest sqrt(I^2 + Q^2)")
        paths.append(path)
    return paths


def fig_snr(params, out_dir: Path, t_f: float = READOUT_TF, lo_angle: float = 0.0, **_) -> list[Path]:
    results = _readout_results(t_f)
    cols = {"tau_s": results[READOUT_NCRIT[0]].times}
    for n, res in results.items():
        cols[f"snr_ncrit{n}"] = snr(res, lo_angle)
    path = out_dir / "figSNR_snr.csv"
    write_csv(path, cols, "readout.snr: 2 kappa |integral Re[(a_e - a_g) e^{-i phi}] dt| / sqrt(2 kappa tau)\n"
                          f"phi = {lo_angle:g} rad, t_f = {t_f:g} s")
    return [path]


def fig_rob(params, out_dir: Path, t_f: float = READOUT_TF, samples: int = 1000, seed: int = 42,
            workers: int = 1, **_) -> list[Path]:
    grid = np.linspace(-0.2, 0.2, 41)
    paths = []
    for axis in ("resonator", "qubit"):
        cols = {"mismatch": grid}
        for n in READOUT_NCRIT:
            p = dispersive_config(n)
            stats = mc_snr(p, readout_pulse(p, t_f), axis, grid, samples, seed, workers=workers)
            cols[f"mean_snr_ncrit{n}"] = stats.mean_snr
            cols[f"var_snr_ncrit{n}"] = stats.var_snr
        path = out_dir / f"figRob_{axis}.csv"
        write_csv(path, cols, f"robustness.mc_snr, axis = {axis}, samples = {samples}, seed = {seed}\n"
                              "SNR at tau = t_f; other frequency uniform within +-20%")
        paths.append(path)
    return paths


PIPELINES = {
    "fig2a": fig2a, "fig2b": fig2b, "fig3a": fig3a, "fig3b": fig3b,
    "figIQ": fig_iq, "figSNR": fig_snr, "figRob": fig_rob,
}


def reproduce(figure: str, params, out_dir, **kwargs) -> list[Path]:
    if figure not in PIPELINES:
        raise ValidationError(f"unknown figure {figure!r}; choose from {FIGURES}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if isinstance(params, DispersiveParams):
        params = params.resonator()
    elif params is None:
        params = DEFAULT_RESONATOR
    return PIPELINES[figure](params, out_dir, **kwargs)

