"""Desk-scale laboratory for the sharp recovery transition of noiseless
boolean channels: exact posteriors by enumeration, MMSE and divergence
diagnostics, agreement-curve analytics, and grid condition verification."""

from .channels import (
    BalancedSet,
    BgtChannel,
    SbgChannel,
    bgt_apply,
    bgt_solve_nu,
    gaussian_mass,
    sbg_apply,
    symmetric_interval_u,
)
from .conditions import (
    arcsine_inequality_check,
    bgt_witnesses,
    borell_bound_check,
    check_condition,
    condition_rhs,
)
from .infotheory import (
    DnCurve,
    dn_curve,
    kl_estimate,
    left_derivative,
    n_star,
    output_entropy,
    prior_entropy,
)
from .montecarlo import TrialTable, mmse_mc, run_trials
from .overlaps import (
    HermiteExpansion,
    OverlapCurves,
    bgt_agreement,
    bgt_r0,
    bgt_r1,
    hermite_coeffs,
    overlap_pmf,
    sbg_curves,
    bgt_curves,
    sbg_r1,
    sheppard,
    validate_assumptions,
)
from .posterior import (
    ExactPosterior,
    PosteriorState,
    binary_entropy,
    filter_consistent,
    instance_error,
    posterior_entropy,
    predictive_entropy,
    z_count,
)
from .priors import (
    BudgetExceededError,
    DEFAULT_ENUMERATION_BUDGET,
    KSparsePrior,
    Signal,
    overlap,
)
from .sampling import Dataset, generate_dataset
from .sweep import CSV_HEADER, SweepConfig, SweepRow, parse_beta_grid, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BalancedSet",
    "BgtChannel",
    "BudgetExceededError",
    "CSV_HEADER",
    "Dataset",
    "DEFAULT_ENUMERATION_BUDGET",
    "DnCurve",
    "ExactPosterior",
    "HermiteExpansion",
    "KSparsePrior",
    "OverlapCurves",
    "PosteriorState",
    "SbgChannel",
    "Signal",
    "SweepConfig",
    "SweepRow",
    "TrialTable",
    "arcsine_inequality_check",
    "bgt_agreement",
    "bgt_apply",
    "bgt_curves",
    "bgt_r0",
    "bgt_r1",
    "bgt_solve_nu",
    "bgt_witnesses",
    "binary_entropy",
    "borell_bound_check",
    "check_condition",
    "condition_rhs",
    "dn_curve",
    "filter_consistent",
    "gaussian_mass",
    "generate_dataset",
    "hermite_coeffs",
    "instance_error",
    "kl_estimate",
    "left_derivative",
    "mmse_mc",
    "n_star",
    "output_entropy",
    "overlap",
    "overlap_pmf",
    "parse_beta_grid",
    "posterior_entropy",
    "predictive_entropy",
    "prior_entropy",
    "run_sweep",
    "run_trials",
    "sbg_apply",
    "sbg_curves",
    "sbg_r1",
    "sheppard",
    "symmetric_interval_u",
    "validate_assumptions",
    "z_count",
]
