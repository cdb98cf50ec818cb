"""Metabolic models as physical reservoirs: dFBA growth curves, ridge readout
benchmarks and kernel/generalisation rank metrics."""

from ._core import (
    BiomassUpdate,
    ConfigError,
    KineticParams,
    MetabolicModel,
    ModelError,
    NumericalError,
    ReservoirFluxError,
    apply_deletion,
    default_alphas,
    evaluate_gpr,
    fit_ridge_readout,
    generate_ensemble,
    numerical_rank,
    parse_gpr,
    parse_model,
    parse_model_text,
    run_fba,
    run_study,
    screen_single_deletions,
    simulate,
    uptake_glucose,
    uptake_xylose,
)

__all__ = [
    "BiomassUpdate",
    "ConfigError",
    "KineticParams",
    "MetabolicModel",
    "ModelError",
    "NumericalError",
    "ReservoirFluxError",
    "apply_deletion",
    "default_alphas",
    "evaluate_gpr",
    "fit_ridge_readout",
    "generate_ensemble",
    "numerical_rank",
    "parse_gpr",
    "parse_model",
    "parse_model_text",
    "run_fba",
    "run_study",
    "screen_single_deletions",
    "simulate",
    "uptake_glucose",
    "uptake_xylose",
]
