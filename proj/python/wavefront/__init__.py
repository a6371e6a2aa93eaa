"""Wave-front tracking for balance laws with coupling conditions."""

from ._core import (
    Run,
    Scenario,
    WftError,
    convergence_study,
    coupling_defect,
    junction_map,
    lemma_constants,
    load_scenario,
    parse_scenario,
    run,
    section_derivative,
    solve_generalized_riemann,
    solve_riemann,
    stationary_profile,
)

__all__ = [
    "Run",
    "Scenario",
    "WftError",
    "convergence_study",
    "coupling_defect",
    "junction_map",
    "lemma_constants",
    "load_scenario",
    "parse_scenario",
    "run",
    "section_derivative",
    "solve_generalized_riemann",
    "solve_riemann",
    "stationary_profile",
]
