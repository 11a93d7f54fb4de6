import importlib
import math

import numpy as np
import pytest

from pulseforge import _backend
from pulseforge.lincontrol import SystemMatrix
from pulseforge.model import TWO_PI

OMEGA_R = TWO_PI * 0.3e6
KAPPA = TWO_PI * 1e4
# steady-state phase for a real drive at the parameters above
VARTHETA = math.pi / 2 + math.atan(KAPPA / (2 * OMEGA_R))


@pytest.fixture
def ref_sys():
    return SystemMatrix(OMEGA_R, KAPPA)


@pytest.fixture
def target10():
    return 10.0 * np.exp(1j * VARTHETA)


def _backend_modules():
    mods = [pytest.param(importlib.import_module("pulseforge._kernels_py"), id="python")]
    try:
        mods.append(pytest.param(importlib.import_module("pulseforge._kernels"), id="cython"))
    except ImportError:
        mods.append(pytest.param(None, id="cython", marks=pytest.mark.skip("extension not built")))
    return mods


@pytest.fixture(params=_backend_modules())
def kernels(request):
    return request.param


@pytest.fixture(params=_backend_modules())
def backend(request, monkeypatch):
    """Route pulseforge.dynamics through one kernel implementation."""
    monkeypatch.setattr(_backend, "kernels", request.param)
    return request.param
