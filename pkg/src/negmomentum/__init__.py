"""Optimal (negative) momentum and convergence rates for strongly-monotone games."""
from .chebyshev import ChebParams, cheb_t, conv_factor, rate_equals_companion_check
from .dynamics import (
    MethodKind,
    MethodSpec,
    QuadraticGame,
    Trace,
    build_game,
    cheb_schedule,
    companion_spectral_radius,
    game_spectrum_bounds,
    iterations_to_tolerance,
    local_rate_certificate,
    measure_rate,
    simulate,
    step,
    tune_step_size,
    worst_case_radius,
)
from .rates import (
    MomentumParams,
    RateReport,
    Region,
    Sign,
    cheb_from_params,
    ellipse_rho,
    k1_objective,
    k2_objective,
    lower_bound_rate,
    momentum_sign,
    params_from_cheb,
    solve_region_rate,
)
from .regions import (
    EllipseRegion,
    SpectrumBound,
    VertexSet,
    ellipse_membership,
    khat_contains,
    rho_region_membership,
    sandwich_vertices,
)

__all__ = [
    "build_game",
    "cheb_from_params",
    "cheb_schedule",
    "cheb_t",
    "ChebParams",
    "companion_spectral_radius",
    "conv_factor",
    "ellipse_membership",
    "ellipse_rho",
    "EllipseRegion",
    "game_spectrum_bounds",
    "iterations_to_tolerance",
    "k1_objective",
    "k2_objective",
    "khat_contains",
    "local_rate_certificate",
    "lower_bound_rate",
    "measure_rate",
    "MethodKind",
    "MethodSpec",
    "momentum_sign",
    "MomentumParams",
    "params_from_cheb",
    "QuadraticGame",
    "rate_equals_companion_check",
    "RateReport",
    "Region",
    "rho_region_membership",
    "sandwich_vertices",
    "Sign",
    "simulate",
    "solve_region_rate",
    "SpectrumBound",
    "step",
    "Trace",
    "tune_step_size",
    "VertexSet",
    "worst_case_radius",
]

__version__ = "0.1.0"
