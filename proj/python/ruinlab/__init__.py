"""Two-dimensional Brownian risk model laboratory.

Exact finite-horizon ruin formulas, regime classification, constrained
quadratic rates, Monte Carlo estimation of the Pickands-type sojourn
constants and the limiting cumulative-Parisian conditional ratios.
"""

from _ruinlab import (  # noqa: F401
    __version__,
    classify,
    estimate_h,
    estimate_p,
    estimate_r,
    lambda_table,
    level_quantile,
    limit_theorem21,
    limit_theorem22,
    log_rate,
    mc_ratio,
    one_dim_ruin,
    printed_sojourn_constant,
    q_star_global,
    regime_boundary,
    rescale_horizon,
    simulate_pair,
    sojourn_time,
    std_normal_cdf,
    std_normal_survival,
)

__all__ = [
    "classify",
    "estimate_h",
    "estimate_p",
    "estimate_r",
    "lambda_table",
    "level_quantile",
    "limit_theorem21",
    "limit_theorem22",
    "log_rate",
    "mc_ratio",
    "one_dim_ruin",
    "printed_sojourn_constant",
    "q_star_global",
    "regime_boundary",
    "rescale_horizon",
    "simulate_pair",
    "sojourn_time",
    "std_normal_cdf",
    "std_normal_survival",
]
