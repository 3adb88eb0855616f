"""Martingale CLT rates: models, Orlicz norms, Wasserstein distances, bounds.

The package simulates martingale difference sequences with unit total
conditional variance, measures how far their normalized sums sit from the
standard normal in Wasserstein distance, and compares the measured distance
against analytic rate bounds built from Orlicz/Lyapunov coefficients.
"""

from .errors import (ConfigError, DataError, DomainError,
                     InvalidNFunctionError, MartcltError)
from .nfunc import (KINDS, CheckReport, ConjugatePair, NFunction,
                    builtin_nfunctions, check_nfunction, check_order,
                    conjugate, default_check_grid, exp_poly, exp_power,
                    from_spec, g_inverse, inverse, load_tabulated_csv,
                    log_power, power, power_log, sqrt_arg_convex, tabulated)
from .orlicz import SampleMatrix, lp_norm, lyapunov, orlicz_norm
from .mds import (MODEL_KINDS, ConditionalLaw, MdsModel, MdsPath,
                  TruncatedMoments, analytic_v_norm,
                  conditional_trunc_moments, in_scaled_region, make_model,
                  marginal_step_groups, path_laws, sample_final_sums,
                  simulate_ensemble, simulate_path)
from .modify import (ModifiedPath, elongate, elongate_ensemble,
                     stopping_time, truncate, truncate_ensemble)
from .wasserstein import (GaussianPartialMoments, MeanEstimate,
                          WassersteinEstimate, gaussian_partial_moments,
                          gaussian_smooth, norm_cdf, norm_pdf, norm_sf,
                          normal_quantile, normal_quantile_array,
                          region_probability, w1_lower_bound_sin,
                          wr_vs_normal, wr_vs_normal_batched)
from .bounds import (BOUND_IDS, BoundReport, ModelAnalytics, bound_order,
                     evaluate_bound, law_abs_moment, law_phi_mean,
                     population_orlicz_norm, rhs_w1, rhs_w2, rhs_w3, v_term)
from .harness import (CSV_COLUMNS, DEFAULT_N_GRID, DEFAULT_REPLICATIONS,
                      ExperimentConfig, RateFit, distance_points, fit_rate,
                      plot_rates, ratio_points, run_experiment, write_csv)
from .rng import (derive_seed, derive_seed_array, sign_slot, splitmix64_at,
                  splitmix64_mix, uniform_block, uniform_slot)

__version__ = "0.1.0"

__all__ = [
    "BOUND_IDS", "BoundReport", "CSV_COLUMNS", "CheckReport",
    "ConditionalLaw", "ConfigError", "ConjugatePair", "DEFAULT_N_GRID",
    "DEFAULT_REPLICATIONS", "DataError", "DomainError", "ExperimentConfig",
    "GaussianPartialMoments", "InvalidNFunctionError", "KINDS",
    "MODEL_KINDS", "MartcltError", "MdsModel", "MdsPath", "MeanEstimate",
    "ModelAnalytics", "ModifiedPath", "NFunction", "RateFit", "SampleMatrix",
    "TruncatedMoments", "WassersteinEstimate", "analytic_v_norm",
    "bound_order", "builtin_nfunctions", "check_nfunction", "check_order",
    "conditional_trunc_moments", "conjugate", "default_check_grid",
    "derive_seed", "derive_seed_array", "distance_points", "elongate",
    "elongate_ensemble", "evaluate_bound", "exp_poly", "exp_power",
    "fit_rate", "from_spec", "g_inverse", "gaussian_partial_moments",
    "gaussian_smooth", "in_scaled_region", "inverse", "law_abs_moment",
    "law_phi_mean", "load_tabulated_csv", "log_power", "lp_norm", "lyapunov",
    "make_model", "marginal_step_groups", "norm_cdf", "norm_pdf", "norm_sf",
    "normal_quantile", "normal_quantile_array", "orlicz_norm", "path_laws",
    "plot_rates", "population_orlicz_norm", "power", "power_log",
    "ratio_points", "region_probability", "rhs_w1", "rhs_w2", "rhs_w3",
    "run_experiment", "sample_final_sums", "sign_slot", "simulate_ensemble",
    "simulate_path", "splitmix64_at", "splitmix64_mix", "sqrt_arg_convex",
    "stopping_time", "tabulated", "truncate", "truncate_ensemble",
    "uniform_block", "uniform_slot", "v_term", "w1_lower_bound_sin",
    "wr_vs_normal", "wr_vs_normal_batched", "write_csv",
]
