"""Shared domain types and unit handling.

All frequencies are stored in angular units (rad/s). Raw configuration may
tag values as ``"cyclic"`` (Hz, multiplied by 2π on input) or ``"angular"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

TWO_PI = 2.0 * math.pi
UNITS = ("cyclic", "angular")


class ValidationError(ValueError):
    """Raised for physically or structurally invalid inputs."""


def to_angular(value: float, unit: str) -> float:
    if unit == "cyclic":
        return float(value) * TWO_PI
    if unit == "angular":
        return float(value)
    raise ValidationError(f"unknown unit {unit!r}; expected one of {UNITS}")


def from_angular(value: float, unit: str) -> float:
    if unit == "cyclic":
        return float(value) / TWO_PI
    if unit == "angular":
        return float(value)
    raise ValidationError(f"unknown unit {unit!r}; expected one of {UNITS}")


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Lossy resonator: rotation rate ``omega_r`` and decay ``kappa``."""

    omega_r: float
    kappa: float

    def __post_init__(self):
        _finite("omega_r", self.omega_r)
        if not _finite("kappa", self.kappa) > 0:
            raise ValidationError(f"kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class DispersiveParams:
    """Resonator dispersively coupled to a qubit.

    ``chi = g**2 / (omega_q - omega_r)`` and
    ``n_crit = (omega_q - omega_r)**2 / (4 g**2)`` are derived on access.
    """

    omega_r: float
    omega_q: float
    g: float
    kappa: float

    def __post_init__(self):
        for name in ("omega_r", "omega_q", "g"):
            _finite(name, getattr(self, name))
        if not _finite("kappa", self.kappa) > 0:
            raise ValidationError(f"kappa must be positive, got {self.kappa}")
        if self.omega_q == self.omega_r:
            raise ValidationError("omega_q equals omega_r: dispersive shift is singular")

    @property
    def detuning(self) -> float:
        return self.omega_q - self.omega_r

    @property
    def chi(self) -> float:
        return self.g**2 / self.detuning

    @property
    def n_crit(self) -> float:
        if self.g == 0:
            return math.inf
        return self.detuning**2 / (4.0 * self.g**2)

    def resonator(self) -> SystemParams:
        return SystemParams(self.omega_r, self.kappa)


_FREQ_FIELDS = ("omega_r", "omega_q", "g", "kappa")


def validate(params: SystemParams | DispersiveParams | Mapping[str, Any]):
    """Normalise raw parameters to validated, angular-unit dataclasses.

    A mapping may carry a global ``unit`` (``"cyclic"`` or ``"angular"``,
    default angular) and per-field overrides written as
    ``{"value": 0.3e6, "unit": "cyclic"}``. If ``omega_q`` and ``g`` are
    present a :class:`DispersiveParams` is returned, otherwise
    :class:`SystemParams`.
    """
    if isinstance(params, (SystemParams, DispersiveParams)):
        # dataclass construction already validated; rebuild to re-check
        return type(params)(**params.__dict__)
    if not isinstance(params, Mapping):
        raise ValidationError(f"cannot validate {type(params).__name__}")

    unit = params.get("unit", "angular")
    values = {}
    for name in _FREQ_FIELDS:
        if name not in params:
            continue
        raw = params[name]
        if isinstance(raw, Mapping):
            values[name] = to_angular(raw["value"], raw.get("unit", unit))
        else:
            try:
                values[name] = to_angular(raw, unit)
            except (TypeError, ValueError) as exc:
                if isinstance(exc, ValidationError):
                    raise
                raise ValidationError(f"{name}: not a number: {raw!r}") from exc

    for name in ("omega_r", "kappa"):
        if name not in values:
            raise ValidationError(f"missing required field {name!r}")
    has_q = "omega_q" in values
    has_g = "g" in values
    if has_q != has_g:
        raise ValidationError("omega_q and g must be given together")
    if has_q:
        return DispersiveParams(values["omega_r"], values["omega_q"], values["g"], values["kappa"])
    return SystemParams(values["omega_r"], values["kappa"])


def load_config(path: str | Path):
    """Read a JSON configuration file and validate it."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    return validate(raw)


def params_to_config(params: SystemParams | DispersiveParams) -> dict:
    out = {k: v for k, v in params.__dict__.items()}
    out["unit"] = "angular"
    return out


@dataclass(frozen=True)
class SimOptions:
    """Integration options.

    ``dt=None`` selects ``min(2π / (50 |ω|), t_f / 2000)``.
    ``kerr_k`` is a semiclassical Kerr coefficient (rad/s per photon).
    """

    dt: float | None = None
    rel_tol: float = 1e-9
    kerr_k: float = 0.0

    def __post_init__(self):
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be positive, got {self.dt}")
        if not self.rel_tol > 0:
            raise ValidationError(f"rel_tol must be positive, got {self.rel_tol}")
        _finite("kerr_k", self.kerr_k)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled amplitude α(t).

    ``area`` optionally holds the running integral ∫₀^t α dt on the same grid
    (used by the homodyne signal).
    """

    times: np.ndarray
    alphas: np.ndarray
    area: np.ndarray | None = field(default=None)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        alphas = np.asarray(self.alphas, dtype=complex)
        if times.ndim != 1 or times.shape != alphas.shape:
            raise ValidationError("times and alphas must be 1-D arrays of equal length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValidationError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "alphas", alphas)
        if self.area is not None:
            area = np.asarray(self.area, dtype=complex)
            if area.shape != times.shape:
                raise ValidationError("area must match the time grid")
            object.__setattr__(self, "area", area)

    @property
    def photon(self) -> np.ndarray:
        return np.abs(self.alphas) ** 2

    def __len__(self) -> int:
        return self.times.size

    def to_csv(self, path: str | Path, header: str = "") -> None:
        write_csv(
            path,
            {"t_s": self.times, "re_alpha": self.alphas.real,
             "im_alpha": self.alphas.imag, "photon": self.photon},
            header,
        )


def write_csv(path: str | Path, columns: Mapping[str, np.ndarray], header: str = "") -> None:
    """Write equal-length columns; ``header`` lines are emitted as ``#`` comments."""
    path = Path(path)
    data = np.column_stack([np.asarray(v, dtype=float) for v in columns.values()])
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        np.savetxt(fh, data, delimiter=",", fmt="%.17g")
    tmp.replace(path)


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    names = lines[0].strip().split(",")
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    return {name: data[:, i] for i, name in enumerate(names)}
