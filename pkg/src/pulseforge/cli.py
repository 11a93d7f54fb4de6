"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 target unreachable under the given
amplitude bound.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import adiabatic_amplitude, calibrate_hahn, cd_transform, steady_phase
from .dynamics import fock_oracle, integrate
from .figures import FIGURES, DEFAULT_RESONATOR, reproduce
from .lincontrol import SystemMatrix, energy_cost, synth_energy_optimal
from .metrics import efficiency
from .model import (
    DispersiveParams, SimOptions, SystemParams, ValidationError, load_config,
    params_to_config, to_angular, write_csv,
)
from .pulses import Hahn, pulse_from_dict
from .readout import dispersive_config, readout_pulse, readout_trajectories, snr
from .robustness import mc_snr, parse_grid
from .timeoptimal import UnreachableTarget, min_time, synth_time_optimal

EXIT_OK, EXIT_INVALID, EXIT_UNREACHABLE = 0, 2, 3

_TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "μs": 1e-6, "ns": 1e-9}
_FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


# ---------------------------------------------------------------- value parsing

def parse_time(text: str) -> float:
    """``"10us"``, ``"2.5 ms"``, ``"1e-5"`` (seconds) -> seconds."""
    m = re.fullmatch(rf"\s*({_NUMBER})\s*([a-zµμ]*)\s*", text)
    if not m or m.group(2) not in _TIME_UNITS and m.group(2) != "":
        raise ValidationError(f"cannot parse time {text!r}")
    return float(m.group(1)) * _TIME_UNITS.get(m.group(2), 1.0)


def parse_frequency(text: str) -> float:
    """``"0.3MHz"`` (cyclic, times 2π) or a bare number in rad/s."""
    m = re.fullmatch(rf"\s*({_NUMBER})\s*([A-Za-z/]*)\s*", text)
    if not m:
        raise ValidationError(f"cannot parse frequency {text!r}")
    unit = m.group(2).lower()
    value = float(m.group(1))
    if unit in ("", "rad/s"):
        return value
    if unit in _FREQ_UNITS:
        return to_angular(value * _FREQ_UNITS[unit], "cyclic")
    raise ValidationError(f"unknown frequency unit {m.group(2)!r}")


def parse_complex(text: str, steady: float | None = None) -> complex:
    """``"re,im"``, ``"r@phase[rad|deg]"``, ``"r@steady"`` or a real number."""
    text = text.strip()
    try:
        if "@" in text:
            mod, ang = text.split("@", 1)
            r = float(mod)
            ang = ang.strip().lower()
            if ang == "steady":
                if steady is None:
                    raise ValidationError("'@steady' needs a system to define the phase")
                phase = steady
            elif ang.endswith("deg"):
                phase = math.radians(float(ang[:-3]))
            else:
                phase = float(ang[:-3] if ang.endswith("rad") else ang)
            return complex(r * np.exp(1j * phase))
        if "," in text:
            re_, im_ = text.split(",", 1)
            return complex(float(re_), float(im_))
        return complex(float(text), 0.0)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"cannot parse complex amplitude {text!r}") from exc


# ---------------------------------------------------------------- manifest

def _sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    argv: list[str]
    cwd: str
    config: dict | None
    seed: int
    version: str
    outputs: dict[str, str] = field(default_factory=dict)

    def write(self, path: Path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(asdict(self), indent=2) + "\n")
        os.replace(tmp, path)

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def verify_manifest(path) -> bool:
    """Re-run the recorded command and compare output checksums."""
    man = RunManifest.read(path)
    old = Path.cwd()
    try:
        os.chdir(man.cwd)
        if main(man.argv, write_manifest=False) != EXIT_OK:
            return False
        return all(_sha256(Path(p)) == digest for p, digest in man.outputs.items())
    finally:
        os.chdir(old)


# ---------------------------------------------------------------- helpers

def _params(args):
    if args.config:
        return load_config(args.config)
    return DEFAULT_RESONATOR


def _system(args, params) -> SystemMatrix:
    rate = getattr(args, "rate", None)
    if rate is None:
        return SystemMatrix.from_params(params)
    if rate in ("chi", "+chi", "-chi"):
        if not isinstance(params, DispersiveParams):
            raise ValidationError("--rate chi needs a config with omega_q and g")
        return SystemMatrix.from_params(params, -1 if rate == "-chi" else +1)
    return SystemMatrix(parse_frequency(rate), params.kappa)


def _opts(args) -> SimOptions:
    dt = getattr(args, "dt", None)
    return SimOptions(dt=parse_time(dt) if dt else None, kerr_k=getattr(args, "kerr", 0.0) or 0.0)


def _emit_json(obj: dict, out: str | None) -> list[Path]:
    text = json.dumps(obj, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return []
    path = Path(out)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)
    return [path]


def _require_out(args) -> Path:
    if not args.out:
        raise ValidationError(f"{args.command} needs --out")
    return Path(args.out)


def _load_pulse(path: str):
    try:
        return pulse_from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read pulse {path}: {exc}") from exc


# ---------------------------------------------------------------- subcommands

def cmd_synth(args) -> list[Path]:
    params = _params(args)
    system = _system(args, params)
    steady = steady_phase(system)
    alpha0 = parse_complex(args.alpha0, steady)
    alpha_f = parse_complex(args.alphaf, steady)
    report: dict = {}
    if args.kind == "energy":
        t_f = parse_time(args.tf)
        pulse = synth_energy_optimal(system, alpha0, alpha_f, t_f)
        report["j_e"] = energy_cost(pulse).j_e
    elif args.kind == "time":
        if args.eps_max is None or args.eps_max_unit is None:
            raise ValidationError("synth time needs --eps-max and --eps-max-unit")
        eps_max = to_angular(args.eps_max, args.eps_max_unit)
        sol = min_time(system, alpha0, alpha_f, eps_max)
        report = {"t_f_min": sol.t_f_min if sol.reachable else None, "theta": sol.theta,
                  "reachable": sol.reachable, "eps_max": eps_max}
        if not sol.reachable:
            _emit_json({"variant": None, "parameters": None, "report": report}, args.out)
            raise UnreachableTarget(
                f"|α_f - α0 e^(λt)| never enters the reachable disc for eps_max = {eps_max:g} 1/s")
        pulse = synth_time_optimal(sol, system)
    else:
        t_f = parse_time(args.tf)
        if alpha0 != 0:
            raise ValidationError(f"synth {args.kind} starts from vacuum; use --alpha0 0,0")
        modulus = abs(alpha_f)
        if args.kind == "hahn":
            omega0 = (calibrate_hahn(system, modulus, t_f, _opts(args)).omega0
                      if args.calibration == "exact" else adiabatic_amplitude(system, modulus))
            pulse = Hahn(omega0, t_f)
        else:
            pulse = cd_transform(Hahn(adiabatic_amplitude(system, modulus), t_f), system)
            report["final_phase"] = steady
            t = np.linspace(0.0, t_f, 201)
            eps = pulse(t)
            # the imaginary part is the drive on the orthogonal quadrature
            report["quadratures"] = {"t_s": t.tolist(), "in_phase": eps.real.tolist(),
                                     "quadrature": eps.imag.tolist()}
        report["omega0"] = omega0 if args.kind == "hahn" else pulse.base.omega0
        report["j_e"] = energy_cost(pulse).j_e
    return _emit_json({**pulse.to_dict(), "report": report}, args.out)


def cmd_simulate(args) -> list[Path]:
    params = _params(args)
    system = _system(args, params)
    pulse = _load_pulse(args.pulse)
    alpha0 = parse_complex(args.alpha0, steady_phase(system))
    t_f = parse_time(args.tf) if args.tf else pulse.t_f
    opts = _opts(args)
    out = _require_out(args)
    header = f"dynamics.integrate, variant {pulse.to_dict()['variant']}, t_f = {t_f:g} s"
    if args.fock_dim:
        run = fock_oracle(system, pulse, args.fock_dim, t_f, opts, alpha0, n_out=args.n_out)
        traj = run.trajectory
        header = f"dynamics.fock_oracle, dimension {args.fock_dim}, t_f = {t_f:g} s"
        sys.stdout.write(json.dumps({"trace_dev": run.trace_dev, "herm_dev": run.herm_dev,
                                     "max_top_population": run.max_top_population}) + "\n")
    else:
        traj = integrate(system, pulse, alpha0, t_f, opts, n_out=args.n_out)
    traj.to_csv(out, header)
    return [out]


def cmd_analyze(args) -> list[Path]:
    params = _params(args)
    system = _system(args, params)
    steady = steady_phase(system)
    pulse = _load_pulse(args.pulse)
    alpha0 = parse_complex(args.alpha0, steady)
    t_f = parse_time(args.tf) if args.tf else pulse.t_f
    opts = _opts(args)
    traj = integrate(system, pulse, alpha0, t_f, opts)
    final = complex(traj.alphas[-1])
    report = {"t_f": t_f, "j_e": energy_cost(pulse, t_f).j_e,
              "alpha_final": [final.real, final.imag], "photon_final": abs(final) ** 2}
    if args.target:
        target = parse_complex(args.target, steady)
        report["target_residual"] = abs(final - target)
    if abs(final - alpha0) > 0:
        eff = efficiency(traj, system, pulse, opts.kerr_k)
        report.update(eta=eff.eta, eta_bound=eff.eta_bound, s0=eff.s0, path_length=eff.mt_integral)
    return _emit_json(report, args.out)


def _dispersive(args) -> DispersiveParams:
    if args.config:
        params = load_config(args.config)
        if not isinstance(params, DispersiveParams):
            raise ValidationError("readout needs a config with omega_q and g")
        return params
    return dispersive_config(args.ncrit)


def cmd_readout(args) -> list[Path]:
    params = _dispersive(args)
    t_f = parse_time(args.tf)
    out = _require_out(args)
    res = readout_trajectories(params, readout_pulse(params, t_f), _opts(args), n_out=args.n_out)
    write_csv(out, {"tau_s": res.times, "snr": snr(res, args.phi)},
              f"readout.snr, n_crit = {params.n_crit:g}, chi = {params.chi:g} rad/s, "
              f"phi = {args.phi:g} rad, t_f = {t_f:g} s")
    paths = [out]
    if args.iq_out:
        write_csv(args.iq_out, res.iq_normalized(),
                  f"readout.readout_trajectories, n_crit = {params.n_crit:g}, normalised IQ")
        paths.append(Path(args.iq_out))
    return paths


def cmd_robustness(args) -> list[Path]:
    params = _dispersive(args)
    out = _require_out(args)
    grid = parse_grid(args.grid)
    pulse = readout_pulse(params, parse_time(args.tf))
    stats = mc_snr(params, pulse, args.axis, grid, args.samples, args.seed, args.width,
                   args.phi, _opts(args), args.workers)
    write_csv(out, {"mismatch": stats.sweep_axis, "mean_snr": stats.mean_snr,
                    "var_snr": stats.var_snr},
              f"robustness.mc_snr, axis = {args.axis}, samples = {args.samples}, "
              f"seed = {args.seed}, width = {args.width:g}")
    return [out]


def cmd_reproduce(args) -> list[Path]:
    params = load_config(args.config) if args.config else None
    args.out = args.out or "datasets"
    out_dir = Path(args.out)
    return reproduce(args.figure, params, out_dir, samples=args.samples, seed=args.seed,
                     workers=args.workers)


# ---------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON parameter file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file or directory")
    return common


def _sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rate", help="rotation rate: 'chi', '-chi', '0.3MHz' or rad/s")
    p.add_argument("--dt", help="integrator step, e.g. '1ns'")
    p.add_argument("--kerr", type=float, default=0.0, help="Kerr coefficient, rad/s per photon")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulseforge", description="Optimal pulse synthesis "
                                     "and readout analysis for a driven damped resonator.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", default=None, help="JSON parameter file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="output file or directory")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    synth = sub.add_parser("synth", help="synthesise a drive pulse")
    kinds = synth.add_subparsers(dest="kind", required=True)
    for kind in ("energy", "time", "hahn", "cd"):
        p = kinds.add_parser(kind, parents=[common])
        _sim_flags(p)
        p.add_argument("--alpha0", default="0,0")
        p.add_argument("--alphaf", required=True, help="'re,im', 'r@phase' or 'r@steady'")
        if kind == "time":
            p.add_argument("--eps-max", type=float)
            p.add_argument("--eps-max-unit", choices=("angular", "cyclic"))
        else:
            p.add_argument("--tf", required=True, help="duration, e.g. '10us'")
        if kind == "hahn":
            p.add_argument("--calibration", choices=("exact", "adiabatic"), default="exact")

    p = sub.add_parser("simulate", parents=[common], help="integrate a pulse file")
    _sim_flags(p)
    p.add_argument("--pulse", required=True)
    p.add_argument("--alpha0", default="0,0")
    p.add_argument("--tf")
    p.add_argument("--n-out", type=int, default=2001)
    p.add_argument("--fock-dim", type=int, help="run the truncated master equation instead")

    p = sub.add_parser("analyze", parents=[common], help="cost and efficiency of a pulse file")
    _sim_flags(p)
    p.add_argument("--pulse", required=True)
    p.add_argument("--alpha0", default="0,0")
    p.add_argument("--target")
    p.add_argument("--tf")

    sub_help = {"readout": "SNR of a dispersive readout pulse",
                "robustness": "Monte Carlo SNR under frequency mismatch"}
    for name in ("readout", "robustness"):
        p = sub.add_parser(name, parents=[common], help=sub_help[name])
        p.add_argument("--ncrit", type=float, default=100.0)
        p.add_argument("--tf", default="10us")
        p.add_argument("--phi", type=float, default=0.0, help="local-oscillator angle, rad")
        p.add_argument("--dt")
        p.add_argument("--kerr", type=float, default=0.0)
        if name == "readout":
            p.add_argument("--iq-out")
            p.add_argument("--n-out", type=int, default=2001)
        else:
            p.add_argument("--axis", choices=("resonator", "qubit"), required=True)
            p.add_argument("--grid", default="-0.2:0.2:41")
            p.add_argument("--samples", type=int, default=1000)
            p.add_argument("--width", type=float, default=0.2)
            p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("reproduce", parents=[common], help="write a figure dataset")
    p.add_argument("figure", help=f"one of {', '.join(FIGURES)}")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    return parser


COMMANDS = {"synth": cmd_synth, "simulate": cmd_simulate, "analyze": cmd_analyze,
            "readout": cmd_readout, "robustness": cmd_robustness, "reproduce": cmd_reproduce}


_NEGATIVE_VALUE = re.compile(r"-[\d.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--grid -0.2:0.2:41`` as ``--grid=-0.2:0.2:41``.

    argparse only accepts a leading minus on values that parse as plain
    numbers; grid specs, complex amplitudes and durations need this.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None, write_manifest: bool = True) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    try:
        outputs = COMMANDS[args.command](args)
    except UnreachableTarget as exc:
        print(f"pulseforge: unreachable target: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except ValidationError as exc:
        print(f"pulseforge: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if write_manifest and outputs:
        config = params_to_config(load_config(args.config)) if args.config else None
        manifest = RunManifest(argv, str(Path.cwd()), config, args.seed, __version__,
                               {str(p): _sha256(p) for p in outputs})
        target = (Path(args.out) / f"manifest_{args.figure}.json" if args.command == "reproduce"
                  else Path(str(outputs[0]) + ".manifest.json"))
        manifest.write(target)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
