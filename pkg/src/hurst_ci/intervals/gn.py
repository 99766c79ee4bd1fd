"""``g_n(x) = 2x log n - log pi_x^a(0)``, its inverse and the invertibility threshold."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..filter_bank import FilterError, alpha_profile, as_filter, tau_a
from .._optim import grid_golden_max


class UnsupportedFilterError(FilterError):
    pass


@lru_cache(maxsize=256)
def _lag_weights(key):
    """Positive lags ``j`` and ``alpha_j`` (each lag counted once)."""
    from ..filter_bank import Filter

    filt = Filter(key)
    ell = filt.ell
    alpha = alpha_profile(filt)[ell + 1:]
    j = np.arange(1, ell + 1, dtype=float)
    keep = alpha != 0
    return j[keep], alpha[keep], filt.order


def pi0(filt, x) -> float:
    """``pi_x^a(0) = -sum_{j >= 1} alpha_j j^{2x}``, accurate up to x = 1."""
    j, al, p = _lag_weights(as_filter(filt).key())
    if p >= 2:
        # sum alpha_j j^2 = 0: subtract it termwise to keep accuracy near x = 1
        terms = j * j * np.expm1((2.0 * x - 2.0) * np.log(j))
    else:
        terms = j ** (2.0 * x)
    return -math.fsum(al * terms)


def gn(x, filt, n) -> float:
    """``2 x log n - log pi_x^a(0)``."""
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    p0 = pi0(filt, x)
    if not p0 > 0:
        raise ValueError(f"pi_x(0) = {p0} is not positive")
    return 2.0 * x * math.log(n) - math.log(p0)


def gn_inverse(y, filt, n, xtol=1e-12) -> float:
    """Solve ``g_n(x) = y`` on ``(0, 1)`` by bisection.

    Values below ``g_n(0)`` return 0.0 and values beyond reach return 1.0;
    callers clamp as needed.
    """
    filt = as_filter(filt)
    y = float(y)
    if y <= gn(0.0, filt, n):
        return 0.0
    lo, hi = 0.0, 1.0
    top = 1.0 - 1e-15
    if y >= gn(top, filt, n):
        return 1.0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if gn(mid, filt, n) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_ratio(filt, x):
    """``sum alpha_j log(j) j^{2x} / sum alpha_j j^{2x}`` (so g_n' = 2(log n - ratio))."""
    j, al, p = _lag_weights(filt.key())
    lj = np.log(j)
    num = math.fsum(al * lj * j ** (2.0 * x))
    if p >= 2:
        den = math.fsum(al * j * j * np.expm1((2.0 * x - 2.0) * lj))
    else:
        den = math.fsum(al * j ** (2.0 * x))
    return num / den


def invertibility_sup(filt, x_max=0.999):
    """``sup_x`` of the log-weighted ratio over ``[0, x_max]``; returns ``(x*, sup)``."""
    filt = as_filter(filt)
    if filt.order >= 2 and tau_a(filt) <= 0:
        raise UnsupportedFilterError("requires sum a_q a_r (q-r)^2 log|q-r| > 0")
    return grid_golden_max(lambda x: _log_ratio(filt, x), 0.0, x_max)


@lru_cache(maxsize=256)
def _min_n(key):
    from ..filter_bank import Filter

    filt = Filter(key)
    _, s = invertibility_sup(filt)
    # tiny slack so that an exact integer threshold is not pushed up by rounding
    return max(1, math.ceil(math.exp(s) * (1.0 - 1e-12)))


def min_n_invertible(filt) -> int:
    """Smallest ``n`` with ``log n >= sup_x ratio(x)``, which makes ``g_n`` increasing."""
    return _min_n(as_filter(filt).key())
