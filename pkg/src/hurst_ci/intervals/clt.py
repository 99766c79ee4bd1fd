"""Point estimators and CLT-based intervals."""
from __future__ import annotations

import math

import numpy as np

from ..concentration import q_asymptotic
from ..filter_bank import (
    NotSummableError, as_filter, cross_rho_l2_norm_sq, dilate, kappa, rho_l2_norm_sq,
)
from .common import ConfidenceInterval, DilationDesign, normal_quantile
from .concentration_ci import _path_values, asymptotic_length_unknown, log_s_vector
from .gn import gn_inverse, min_n_invertible
from ..statistics import quadratic_variation

# a plug-in estimate clamped to 0 or 1 is moved inside by H_EPS before the
# variance is evaluated
H_EPS = 1e-6


class EstimatorDomainError(ValueError):
    """The plug-in estimate falls where the limiting variance does not exist."""


def estimator_std(path, filt, C=None) -> float:
    """``g_n^{-1}(-log S_n)``, clamped to [0, 1]."""
    filt = as_filter(filt)
    x = _path_values(path, C)
    return gn_inverse(-math.log(quadratic_variation(x, filt).s_n), filt, x.size)


def estimator_gen(path, filt, M=2) -> float:
    """Log-regression estimator ``A.L_S / (2 |A|^2)`` over the dilations 1..M."""
    filt = as_filter(filt)
    A = DilationDesign.regression(M).d
    L_S = log_s_vector(path, filt, int(M))
    return float(A @ L_S) / (2.0 * float(A @ A))


def _clip_h(h):
    return min(max(float(h), H_EPS), 1.0 - H_EPS)


def sigma2_std(filt, H) -> float:
    """``0.5 * sum_i rho_H(i)^2``."""
    try:
        return 0.5 * rho_l2_norm_sq(as_filter(filt), float(H))
    except NotSummableError as exc:
        raise EstimatorDomainError(str(exc)) from exc


def gram_matrix(filt, H, M) -> np.ndarray:
    """``G[m1, m2] = sum_i rho^{a^m1, a^m2}_H(i)^2`` for ``m1, m2 = 1..M``."""
    filt = as_filter(filt)
    G = np.empty((M, M))
    try:
        for i in range(M):
            for j in range(i, M):
                G[i, j] = G[j, i] = cross_rho_l2_norm_sq(filt, i + 1, j + 1, float(H))
    except NotSummableError as exc:
        raise EstimatorDomainError(str(exc)) from exc
    return G


def sigma2_gen(filt, H, M) -> float:
    """``A' G A / (2 |A|^4)``; for M = 2 this is
    ``(G11 + G22 - 2 G12) / (2 log(2)^2)``."""
    A = DilationDesign.regression(M).d
    G = gram_matrix(filt, H, int(M))
    return float(A @ G @ A) / (2.0 * float(A @ A) ** 2)


def _clt_interval(est, sigma, v_n, alpha, method, **diag):
    z = normal_quantile(1.0 - alpha / 2.0)
    half = z * sigma / v_n
    lo = max(0.0, est - half)
    hi = min(1.0, est + half)
    return ConfidenceInterval(lo, hi, 1.0 - alpha, method, True, est,
                              {"sigma": sigma, "z": z, "v_n": v_n, **diag})


def ci_clt_known(path, filt, alpha=0.05, C=None) -> ConfidenceInterval:
    filt = as_filter(filt)
    x = _path_values(path, C)
    n = x.size
    n_min = max(filt.ell + 1, min_n_invertible(filt))
    if n < n_min:
        return ConfidenceInterval.infeasible("CLT-known", alpha, f"n={n} below the minimum {n_min}", n_min=n_min)
    est = estimator_std(x, filt)
    h = _clip_h(est)
    sigma = math.sqrt(sigma2_std(filt, h))
    return _clt_interval(est, sigma, math.sqrt(n) * math.log(n), alpha, "CLT-known", H_plugin=h)


def ci_clt_unknown(path, filt, M=2, alpha=0.05) -> ConfidenceInterval:
    filt = as_filter(filt)
    x = _path_values(path)
    n = x.size
    M = int(M)
    if n < M * filt.ell + 1:
        return ConfidenceInterval.infeasible(
            "CLT-unknown", alpha, f"n={n} below M*l+1={M * filt.ell + 1}", n_min=M * filt.ell + 1)
    # the regression estimate is not confined to [0, 1]; the interval is centred
    # on its projection so that both clamped endpoints stay ordered
    est = min(max(estimator_gen(x, filt, M), 0.0), 1.0)
    h = _clip_h(est)
    sigma = math.sqrt(sigma2_gen(filt, h, M))
    return _clt_interval(est, sigma, math.sqrt(n), alpha, "CLT-unknown", H_plugin=h, M=M)


def length_ratio_profile(filt, M=None, alpha=0.05, H_grid=None):
    """Ratio of asymptotic lengths (concentration / CLT) over ``H_grid``.

    Known scale (``M is None``): ``q(alpha/2) / (2 z sigma_std(H))``, both
    lengths carrying the common factor ``1/(sqrt(n) log n)``.  Unknown scale:
    ``d.q_M / (d.L_M * 2 z sigma_gen(H))`` with ``d = A``.
    Returns an ``(len(H_grid), 2)`` array of ``(H, ratio)`` rows.
    """
    filt = as_filter(filt)
    H_grid = np.linspace(0.05, 0.95, 19) if H_grid is None else np.asarray(H_grid, dtype=float)
    z = normal_quantile(1.0 - alpha / 2.0)
    if M is None:
        num = q_asymptotic(alpha / 2.0, kappa(filt))
        sig = [math.sqrt(sigma2_std(filt, h)) for h in H_grid]
    else:
        num = asymptotic_length_unknown(filt, int(M), alpha, 1)
        sig = [math.sqrt(sigma2_gen(filt, h, int(M))) for h in H_grid]
    ratio = num / (2.0 * z * np.asarray(sig))
    return np.column_stack([H_grid, ratio])
