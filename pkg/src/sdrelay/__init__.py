"""Achievable-rate regions for state-dependent relay channels with private
messages: Gaussian and finite-alphabet evaluators, compression-constraint
solving, and trade-off sweeps."""

from .errors import (ConfigError, ConstraintInfeasibleError,
                     MalformedKernelError, NumericalConditioningError,
                     ParameterInfeasibleError, RelayToolkitError,
                     TableSizeError)
from .gaussian import (GaussianJoint, PowerConfig, SchemeParams,
                       assemble_covariance, conditional_mi, solve_pu1)
from .region import (MIValues, RateBounds, RatePoint, REGION_TOL,
                     aux_rate_feasible, bounds_from_mi,
                     evaluate_gaussian_region, mi_values_gaussian,
                     region_contains, solve_nhat)
from .discrete import (AlphabetSpec, CausalFactorization, DmFactorization,
                       JointPmf, build_joint, causal_subset_check,
                       direct_no_relay_bounds, direct_perfect_csi_bounds,
                       direct_single_user_source_csi_bounds,
                       direct_state_free_bounds, evaluate_theorem1,
                       evaluate_theorem2, lift_causal, mi_values_from_joint,
                       no_relay_factorization, perfect_full_csi_state,
                       perfect_relay_csi_state, perfect_source_csi_state,
                       pmf_conditional_mi, random_causal_factorization,
                       random_dm_factorization,
                       single_user_source_csi_factorization,
                       state_free_factorization)
from .frontier import (FrontierCurve, FrontierPoint, GridSpec, SweepResult,
                       max_r12_endpoint, refine, sdrc_scalar, sweep,
                       tradeoff_curve)

__version__ = "0.1.0"

__all__ = [
    "AlphabetSpec", "CausalFactorization", "ConfigError",
    "ConstraintInfeasibleError", "DmFactorization", "FrontierCurve",
    "FrontierPoint", "GaussianJoint", "GridSpec", "JointPmf",
    "MIValues", "MalformedKernelError", "NumericalConditioningError",
    "ParameterInfeasibleError", "PowerConfig", "REGION_TOL", "RateBounds",
    "RatePoint", "RelayToolkitError", "SchemeParams", "SweepResult",
    "TableSizeError", "assemble_covariance", "aux_rate_feasible",
    "bounds_from_mi", "build_joint", "causal_subset_check", "conditional_mi",
    "direct_no_relay_bounds", "direct_perfect_csi_bounds",
    "direct_single_user_source_csi_bounds", "direct_state_free_bounds",
    "evaluate_gaussian_region", "evaluate_theorem1", "evaluate_theorem2",
    "lift_causal", "max_r12_endpoint", "mi_values_from_joint",
    "mi_values_gaussian", "no_relay_factorization", "perfect_full_csi_state",
    "perfect_relay_csi_state", "perfect_source_csi_state",
    "pmf_conditional_mi", "random_causal_factorization",
    "random_dm_factorization", "refine", "region_contains", "sdrc_scalar",
    "single_user_source_csi_factorization", "solve_nhat", "solve_pu1",
    "state_free_factorization", "sweep", "tradeoff_curve",
]
