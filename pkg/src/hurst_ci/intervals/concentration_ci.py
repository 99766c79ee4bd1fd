"""Non-asymptotic intervals from the concentration bounds (known and unknown scale)."""
from __future__ import annotations

import math

import numpy as np

from ..filter_bank import as_filter, dilate, hurst_domain, kappa
from ..statistics import quadratic_variation
from .common import ConfidenceInterval, DilationDesign, cached_quantiles, kappa_dilated
from .gn import gn_inverse, min_n_invertible


def _path_values(path, C=None):
    x = np.asarray(getattr(path, "values", path), dtype=float)
    return x if C is None or C == 1 else x / C


def x_bounds(alpha, kap, n_eff):
    """``(x_l, x_r) = (1 - q_l/sqrt(n_eff), 1 + q_r/sqrt(n_eff))`` and the quantiles."""
    q_l, q_r = cached_quantiles(float(alpha), float(kap), int(n_eff))
    s = math.sqrt(n_eff)
    return 1.0 - q_l / s, 1.0 + q_r / s, q_l, q_r


def ci_known_scale(path, filt, alpha=0.05, C=None) -> ConfidenceInterval:
    """Interval for H when the scale is known (C = 1, or pass ``C`` to rescale)."""
    filt = as_filter(filt)
    x = _path_values(path, C)
    n = x.size
    n_min = max(filt.ell + 1, min_n_invertible(filt))
    if n < n_min:
        return ConfidenceInterval.infeasible("CI-known", alpha, f"n={n} below the minimum {n_min}", n_min=n_min)
    s_n = quadratic_variation(x, filt).s_n
    kap = kappa(filt)
    x_l, x_r, q_l, q_r = x_bounds(alpha / 2.0, kap, n - filt.ell)
    log_s = math.log(s_n)
    tau = hurst_domain(filt)
    lo = max(0.0, gn_inverse(math.log(x_l) - log_s, filt, n))
    hi = min(tau, gn_inverse(math.log(x_r) - log_s, filt, n))
    est = gn_inverse(-log_s, filt, n)
    diag = {"S_n": s_n, "kappa": kap, "q_l": q_l, "q_r": q_r, "n_eff": n - filt.ell}
    return ConfidenceInterval(lo, hi, 1.0 - alpha, "CI-known", True, est, diag)


def log_s_vector(path, filt, M):
    """``(log S_n^{a^m})_{m=1..M}``."""
    x = _path_values(path)
    return np.array([math.log(quadratic_variation(x, dilate(filt, m)).s_n) for m in range(1, M + 1)])


def ci_unknown_scale(path, filt, design: DilationDesign | int = 2, alpha=0.05) -> ConfidenceInterval:
    """Scale-free interval combining the dilations ``a^1..a^M`` through ``design.d``."""
    filt = as_filter(filt)
    if not isinstance(design, DilationDesign):
        design = DilationDesign.regression(design)
    M, d, L = int(design.M), design.d, design.L_M
    x = _path_values(path)
    n = x.size
    if n < M * filt.ell + 1:
        return ConfidenceInterval.infeasible(
            "CI-unknown", alpha, f"n={n} below M*l+1={M * filt.ell + 1}", n_min=M * filt.ell + 1)
    L_S = log_s_vector(x, filt, M)
    level = alpha / (2.0 * M)
    L_inf = np.empty(M)
    L_sup = np.empty(M)
    q_tab = []
    for i, m in enumerate(range(1, M + 1)):
        kap = kappa_dilated(filt, m)
        x_l, x_r, q_l, q_r = x_bounds(level, kap, n - m * filt.ell)
        if d[i] < 0:
            L_inf[i], L_sup[i] = math.log(x_l), math.log(x_r)
        else:
            L_inf[i], L_sup[i] = math.log(x_r), math.log(x_l)
        q_tab.append({"m": m, "kappa": kap, "n_eff": n - m * filt.ell, "q_l": q_l, "q_r": q_r})
    denom = 2.0 * float(d @ L)
    raw_lo = float(d @ (L_S - L_inf)) / denom
    raw_hi = float(d @ (L_S - L_sup)) / denom
    lo = max(0.0, raw_lo)
    hi = min(1.0, raw_hi)
    if lo > hi:  # only possible if both raw ends fall outside [0, 1] on one side
        lo = hi = min(max(raw_lo, 0.0), 1.0)
    est = float(d @ L_S) / denom
    diag = {"log_S": L_S.tolist(), "d": d.tolist(), "quantiles": q_tab, "raw": [raw_lo, raw_hi]}
    return ConfidenceInterval(lo, hi, 1.0 - alpha, "CI-unknown", True, est, diag)


def asymptotic_length_unknown(filt, design: DilationDesign | int, alpha, n) -> float:
    """``d.q_M(alpha/2M) / (sqrt(n) d.L_M)`` with ``q = sqrt(2 kappa log(1/level))``."""
    from ..concentration import q_asymptotic

    filt = as_filter(filt)
    if not isinstance(design, DilationDesign):
        design = DilationDesign.regression(design)
    M, d = int(design.M), design.d
    q = np.array([q_asymptotic(alpha / (2.0 * M), kappa_dilated(filt, m)) for m in range(1, M + 1)])
    q_M = np.where(d < 0, -q, q)
    return float(d @ q_M) / (math.sqrt(n) * float(d @ design.L_M))


def exact_length_unknown(filt, design: DilationDesign | int, alpha, n) -> float:
    """Unclamped length ``d.(L_inf - L_sup) / (2 d.L_M)``; it does not depend on the data."""
    filt = as_filter(filt)
    if not isinstance(design, DilationDesign):
        design = DilationDesign.regression(design)
    M, d = int(design.M), design.d
    diff = np.empty(M)
    for i, m in enumerate(range(1, M + 1)):
        x_l, x_r, _, _ = x_bounds(alpha / (2.0 * M), kappa_dilated(filt, m), n - m * filt.ell)
        diff[i] = (math.log(x_l) - math.log(x_r)) if d[i] < 0 else (math.log(x_r) - math.log(x_l))
    return float(d @ diff) / (2.0 * float(d @ design.L_M))
