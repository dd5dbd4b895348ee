"""Minimum-power configuration of cell-less radio networks."""

from ._cellless import (
    AnnealConfig,
    CtmConfig,
    MetricsBundle,
    NoFeasibleSolution,
    ParseError,
    Scenario,
    SolutionState,
    UnservedUser,
    ValidationError,
    beam_width,
    builtin_names,
    builtin_scenario,
    element_gain_db,
    evaluate,
    hungarian,
    incident_field,
    load_scenario,
    parse_scenario,
    parse_solution,
    solve_ctm,
    solve_maxrate,
    user_azimuth,
    validate,
)

__all__ = [
    "AnnealConfig",
    "CtmConfig",
    "MetricsBundle",
    "NoFeasibleSolution",
    "ParseError",
    "Scenario",
    "SolutionState",
    "UnservedUser",
    "ValidationError",
    "beam_width",
    "builtin_names",
    "builtin_scenario",
    "element_gain_db",
    "evaluate",
    "hungarian",
    "incident_field",
    "load_scenario",
    "parse_scenario",
    "parse_solution",
    "solve_ctm",
    "solve_maxrate",
    "user_azimuth",
    "validate",
]
