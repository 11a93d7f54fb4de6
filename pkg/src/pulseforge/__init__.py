"""Optimal drive synthesis and readout simulation for a lossy resonator."""

from ._backend import BACKEND
from .baselines import (HahnSpec, calibrate_hahn, cd_transform, hahn_pulse,
                        steady_phase, steady_state)
from .dynamics import fock_oracle, integrate, response_exact
from .figures import reproduce
from .lincontrol import (CostReport, SystemMatrix, energy_cost, gramian, propagator,
                         synth_energy_optimal)
from .metrics import efficiency, geodesic_s0
from .model import (DispersiveParams, SimOptions, SystemParams, Trajectory,
                    ValidationError, validate)
from .pulses import CdOf, Constant, EnergyOptimal, Hahn, Pulse, Sampled, TimeOptimal
from .readout import readout_trajectories, snr
from .robustness import mc_snr
from .timeoptimal import min_time, optimal_phase, synth_time_optimal

__version__ = "0.1.0"
