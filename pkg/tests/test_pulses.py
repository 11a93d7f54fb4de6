import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pulseforge.lincontrol import synth_energy_optimal
from pulseforge.model import ValidationError
from pulseforge.pulses import (
    CdOf, Constant, EnergyOptimal, Hahn, Sampled, TimeOptimal, pulse_from_dict,
)

from conftest import KAPPA, OMEGA_R

PULSES = [
    EnergyOptimal(1 - 1j, 3 + 4j, 2e-6, OMEGA_R, KAPPA),
    TimeOptimal(1e7, 0.4, OMEGA_R, 1e-6),
    Hahn(2e7, 5e-6),
    Constant(2 - 1j, 1e-6),
    CdOf(Hahn(2e7, 5e-6), OMEGA_R, KAPPA),
    Sampled(np.linspace(0, 1e-6, 5), np.array([0, 1, 2 + 1j, 1, 0])),
]


@pytest.mark.parametrize("pulse", PULSES, ids=lambda p: type(p).__name__)
def test_json_round_trip(pulse):
    text = json.dumps(pulse.to_dict())
    back = pulse_from_dict(json.loads(text))
    t = np.linspace(0, pulse.t_f, 17)
    np.testing.assert_array_equal(back(t), pulse(t))
    assert back.t_f == pulse.t_f


@pytest.mark.parametrize("pulse", PULSES, ids=lambda p: type(p).__name__)
def test_evaluation_is_pure(pulse):
    t = np.linspace(0, pulse.t_f, 9)
    np.testing.assert_array_equal(pulse(t), pulse(t))
    assert pulse(t[3]) == pulse(t)[3]


@pytest.mark.parametrize("pulse", PULSES[:4], ids=lambda p: type(p).__name__)
def test_analytic_derivative_matches_finite_difference(pulse):
    t = np.linspace(0.1, 0.9, 7) * pulse.t_f
    h = 1e-7 * pulse.t_f
    fd = (pulse(t + h) - pulse(t - h)) / (2 * h)
    scale = np.max(np.abs(pulse(t))) / pulse.t_f
    np.testing.assert_allclose(pulse.derivative(t), fd, atol=1e-5 * scale)


def test_exponential_forms():
    for pulse in (PULSES[0], PULSES[1], PULSES[3]):
        c, nu = pulse.exponential_form()
        t = np.linspace(0, pulse.t_f, 11)
        np.testing.assert_allclose(c * np.exp(nu * t), pulse(t), rtol=1e-12)
    assert Hahn(1.0, 1e-6).exponential_form() is None


def test_energy_optimal_coefficient_matches_factory():
    p = synth_energy_optimal(__import__("pulseforge").SystemMatrix(OMEGA_R, KAPPA), 0, 10j, 1e-5)
    assert isinstance(p, EnergyOptimal)
    assert p(1e-5) == pytest.approx(p.coefficient, rel=1e-15)


def test_hahn_shape():
    p = Hahn(3.0, 2e-6)
    assert p(0.0) == 0
    assert p(2e-6) == pytest.approx(3.0, rel=1e-15)
    assert p(1e-6) == pytest.approx(1.5, rel=1e-15)
    vals = np.real(p(np.linspace(0, 2e-6, 200)))
    assert np.all(np.diff(vals) >= 0)


@given(st.floats(min_value=-1e3, max_value=1e3), st.floats(min_value=-1e3, max_value=1e3))
def test_constant_has_zero_derivative(re, im):
    p = Constant(complex(re, im), 1e-6)
    assert np.all(p.derivative(np.linspace(0, 1e-6, 5)) == 0)


def test_sampled_rejects_outside_grid():
    p = PULSES[-1]
    with pytest.raises(ValidationError):
        p(2e-6)


@pytest.mark.parametrize("bad", [
    {"variant": "Nope", "parameters": {}},
    {"variant": "Hahn"},
    {"variant": "Hahn", "parameters": {"omega0": 1.0}},
    {"variant": "Hahn", "parameters": {"omega0": 1.0, "t_f": -1}},
])
def test_malformed_descriptions_rejected(bad):
    with pytest.raises(ValidationError):
        pulse_from_dict(bad)
