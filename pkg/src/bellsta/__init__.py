"""Fast Bell-state preparation in a coupled two-spin system.

Adiabatic passage, transitionless (counterdiabatic) driving and
invariant-based inverse engineering, with a unitary Schroedinger propagator
to check population transfer and fidelity.
"""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    Basis,
    CrossingTimes,
    ParameterError,
    QuantumState,
    SystemParams,
    TimeGrid,
    adiabaticity_q,
    basis_state,
    crossing_times,
)
from .propagate import IntegrationError, Trajectory, adiabatic_overlap, fidelity, propagate  # noqa: E402
from .experiments import (  # noqa: E402
    Method,
    Scenario,
    fidelity_vs_duration,
    lri_design_report,
    run_scenario,
    sweep_final_population,
)

__all__ = [
    "Basis",
    "CrossingTimes",
    "IntegrationError",
    "Method",
    "ParameterError",
    "QuantumState",
    "Scenario",
    "SystemParams",
    "TimeGrid",
    "Trajectory",
    "adiabatic_overlap",
    "adiabaticity_q",
    "basis_state",
    "crossing_times",
    "fidelity",
    "fidelity_vs_duration",
    "lri_design_report",
    "propagate",
    "run_scenario",
    "sweep_final_population",
]
