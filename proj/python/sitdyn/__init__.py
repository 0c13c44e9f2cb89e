"""Mosquito population dynamics with sterile-male release control.

Thin wrapper around the C++ core. Scalar fields cross the boundary as numpy
arrays of shape (ny, nx).
"""

from ._sitdyn import (
    BioParams,
    ConditionReport,
    ConfigError,
    ControlParams,
    DerivedRates,
    Equilibrium,
    EquilibriumKind,
    GridSpec,
    KFieldParams,
    MaskKind,
    MaskSpec,
    OdeState,
    RunReport,
    SimConfig,
    SimulationError,
    SitOdeState,
    Snapshot,
    Stability,
    TimePoint,
    apply_set,
    apply_sets,
    basic_offspring_number,
    carrying_capacity_at,
    carrying_capacity_field,
    check_stabilization_conditions,
    control_gain_psi,
    derived_rates,
    equilibria,
    feedback_u,
    integrate_life_cycle,
    integrate_sit,
    life_cycle_rhs,
    lyapunov_V_ode,
    ode_decay_rate_c0,
    parse_config,
    preset,
    preset_names,
    routh_coefficients,
    run,
    scaled_offspring,
    sit_rhs,
    theta_decay_rate,
    threshold_rates,
    write_config,
)

__all__ = [
    "BioParams",
    "ConditionReport",
    "ConfigError",
    "ControlParams",
    "DerivedRates",
    "Equilibrium",
    "EquilibriumKind",
    "GridSpec",
    "KFieldParams",
    "MaskKind",
    "MaskSpec",
    "OdeState",
    "RunReport",
    "SimConfig",
    "SimulationError",
    "SitOdeState",
    "Snapshot",
    "Stability",
    "TimePoint",
    "apply_set",
    "apply_sets",
    "basic_offspring_number",
    "carrying_capacity_at",
    "carrying_capacity_field",
    "check_stabilization_conditions",
    "control_gain_psi",
    "derived_rates",
    "equilibria",
    "feedback_u",
    "integrate_life_cycle",
    "integrate_sit",
    "life_cycle_rhs",
    "lyapunov_V_ode",
    "ode_decay_rate_c0",
    "parse_config",
    "preset",
    "preset_names",
    "routh_coefficients",
    "run",
    "scaled_offspring",
    "sit_rhs",
    "theta_decay_rate",
    "threshold_rates",
    "write_config",
]

__version__ = "0.1.0"
