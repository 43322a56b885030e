"""Two-mode condensate dynamics in the coherent-state (Bloch) picture.

The state of N bosons shared between two trapped modes is followed through
the rotation angles r(t), phi(t); the total, dynamical and geometric phases
are computed along the path and can be checked against an exact Fock-space
propagator.
"""

from .blochstate import BlochState, bloch_overlap, bloch_to_fock, bloch_vector, uncertainty_product
from .characteristic import (
    InconsistentInputsError,
    Trajectory,
    closed_form_off_resonant,
    closed_form_on_resonant,
    constant_r_solution,
    integrate_characteristic,
    motion_constant,
    portrait_surface,
    solve,
)
from .config import ConfigError, RunConfig, load_config, parse_config
from .fockoracle import NonConvergenceError, PropagatorConfig, compare_with_oracle, propagate
from .phases import PhaseRecord, compute_phases, geometric_phase_const_r, locate_jumps
from .regimes import Regime
from .schedules import HarmonicSchedule, IntegrationError, ScheduleSet, detuning_phase, eval_trap
from .tables import RunResult, run_trajectory, trajectory_table

__version__ = "0.1.0"

__all__ = [
    "BlochState", "bloch_overlap", "bloch_to_fock", "bloch_vector", "uncertainty_product",
    "InconsistentInputsError", "Trajectory", "closed_form_off_resonant", "closed_form_on_resonant",
    "constant_r_solution", "integrate_characteristic", "motion_constant", "portrait_surface", "solve",
    "ConfigError", "RunConfig", "load_config", "parse_config",
    "NonConvergenceError", "PropagatorConfig", "compare_with_oracle", "propagate",
    "PhaseRecord", "compute_phases", "geometric_phase_const_r", "locate_jumps",
    "Regime",
    "HarmonicSchedule", "IntegrationError", "ScheduleSet", "detuning_phase", "eval_trap",
    "RunResult", "run_trajectory", "trajectory_table",
]
