"""Confidence intervals and point estimators for the Hurst parameter."""
from .bnp import (
    bnp_b, bnp_feasible, bnp_g, bnp_g_inverse, bnp_max_h_star, bnp_min_n, bnp_q, bnp_statistic, ci_bnp,
)
from .clt import (
    EstimatorDomainError, ci_clt_known, ci_clt_unknown, estimator_gen, estimator_std, gram_matrix,
    length_ratio_profile, sigma2_gen, sigma2_std,
)
from .common import METHODS, ConfidenceInterval, DesignError, DilationDesign, normal_quantile
from .concentration_ci import (
    asymptotic_length_unknown, ci_known_scale, ci_unknown_scale, exact_length_unknown, log_s_vector, x_bounds,
)
from .gn import UnsupportedFilterError, gn, gn_inverse, invertibility_sup, min_n_invertible, pi0

__all__ = [name for name in dir() if not name.startswith("_")]
