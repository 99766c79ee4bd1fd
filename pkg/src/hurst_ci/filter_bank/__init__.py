"""Filters, dilations, correlations of filtered fBm and the constants kappa^a."""
from .correlation import (
    CorrelationProfile,
    NotSummableError,
    UndefinedLimitError,
    cross_pi,
    cross_rho,
    cross_rho_l2_norm_sq,
    increment_structure,
    pi,
    rho,
    rho_l1_exact,
    rho_l1_norm,
    rho_l2_norm_sq,
)
from .filters import (
    Filter,
    FilterError,
    UnknownFilterError,
    alpha_profile,
    as_filter,
    builtin_filter,
    builtin_names,
    detect_order,
    dilate,
    filter_source,
    make_increment_filter,
    tau_a,
)
from .kappa import AssumptionError, hurst_domain, kappa, l1_norm, sup_l1_norm

__all__ = [name for name in dir() if not name.startswith("_")]
