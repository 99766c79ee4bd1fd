"""Baseline interval for known scale built on the second-order increments.

Observations ``B(i/n)``, ``i = 0..n+1``; ``S_n`` is the mean of the ``n``
squared second differences and ``g(x) = x - log(4 - 4^x)/(2 log n)``, so that
``g(H) ~ -log(S_n)/(2 log n)``.  The interval needs an a-priori bound
``H <= H*`` and a sample large enough that ``q_n(alpha) < (4 - 4^{H*}) sqrt(n)``.
"""
from __future__ import annotations

import math

import numpy as np

from .common import ConfidenceInterval


def bnp_b(alpha, n) -> float:
    return 71.0 / math.sqrt(n) * math.log(2.0 / alpha)


def bnp_q(alpha, n) -> float:
    b = bnp_b(alpha, n)
    return 0.5 * (b + math.sqrt(b * b + 852.0 * math.log(2.0 / alpha)))


def bnp_feasible(alpha, n, h_star) -> bool:
    return bnp_q(alpha, n) < (4.0 - 4.0**h_star) * math.sqrt(n)


def bnp_min_n(alpha, h_star, n_max=10**7) -> int:
    """Smallest ``n`` meeting the sample-size condition (the left side decreases in n)."""
    lo, hi = 1, 2
    while not bnp_feasible(alpha, hi, h_star):
        lo, hi = hi, hi * 2
        if hi > n_max:
            raise ValueError("no feasible n below n_max")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bnp_feasible(alpha, mid, h_star):
            hi = mid
        else:
            lo = mid
    return hi


def bnp_max_h_star(alpha, n) -> float:
    """``log(max(1, 4 - q_n/sqrt(n))) / log 4``: the largest admissible ``H*``."""
    return math.log(max(1.0, 4.0 - bnp_q(alpha, n) / math.sqrt(n))) / math.log(4.0)


def bnp_g(x, n) -> float:
    return x - math.log(4.0 - 4.0**x) / (2.0 * math.log(n))


def bnp_g_inverse(y, n, xtol=1e-12) -> float:
    """Inverse of the increasing map ``bnp_g`` on (0, 1), clamped to [0, 1]."""
    if y <= bnp_g(0.0, n):
        return 0.0
    lo, hi = 0.0, 1.0
    if y >= bnp_g(1.0 - 1e-15, n):
        return 1.0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if bnp_g(mid, n) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bnp_statistic(path) -> tuple[float, int]:
    """``(S_n, n)`` for a path with ``n + 2`` observations."""
    x = np.asarray(getattr(path, "values", path), dtype=float)
    if x.size < 3:
        raise ValueError("need at least 3 observations")
    d2 = x[2:] - 2.0 * x[1:-1] + x[:-2]
    return math.fsum(d2 * d2) / d2.size, d2.size


def ci_bnp(path, alpha=0.05, h_star=0.8) -> ConfidenceInterval:
    s_n, n = bnp_statistic(path)
    q = bnp_q(alpha, n)
    c = (4.0 - 4.0**h_star) * math.sqrt(n)
    diag = {"S_n": s_n, "q_n": q, "n": n, "h_star": h_star}
    if not q < c:
        return ConfidenceInterval.infeasible("BNP", alpha, "sample too small for the requested H*", **diag)
    two_log_n = 2.0 * math.log(n)
    centre = -math.log(s_n) / two_log_n
    lo = bnp_g_inverse(centre + math.log(1.0 - q / c) / two_log_n, n)
    hi = bnp_g_inverse(centre + math.log(1.0 + q / c) / two_log_n, n)
    est = bnp_g_inverse(centre, n)
    return ConfidenceInterval(max(0.0, lo), min(1.0, hi), 1.0 - alpha, "BNP", True, est, diag)
