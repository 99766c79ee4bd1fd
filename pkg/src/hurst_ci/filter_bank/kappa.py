"""The H-uniform constant ``kappa^a = 2 sup_H ||rho_H^a||_1``."""
from __future__ import annotations

from functools import lru_cache

from .._optim import grid_golden_max
from .correlation import increment_structure, rho_l1_exact, rho_l1_norm
from .filters import Filter, FilterError, as_filter, tau_a


class AssumptionError(FilterError):
    """tau^a = 0 for a filter of order p >= 2: the H = 1 limit is undefined."""


def hurst_domain(filt) -> float:
    """Upper end of the H range covered by ``kappa``: 1/2 for p = 1, else 1."""
    return 0.5 if as_filter(filt).order == 1 else 1.0


def l1_norm(filt: Filter, H: float) -> float:
    """``||rho_H^a||_1``, closed form when available.

    For p = 1 the value at H = 1/2 is the left limit, which is what enters
    the supremum.
    """
    left = filt.order == 1 and H == 0.5
    if increment_structure(filt) is not None:
        return rho_l1_exact(filt, H, left_limit=left)
    return rho_l1_norm(filt, H, left_limit=left).l1_norm


def sup_l1_norm(filt, step=1e-3, rel_tol=1e-8):
    """``(H*, sup_H ||rho_H^a||_1)`` over ``[0, 1/2]`` (p = 1) or ``[0, 1]``."""
    filt = as_filter(filt)
    if filt.order >= 2 and abs(tau_a(filt)) < 1e-14:
        raise AssumptionError("tau^a = 0: kappa is undefined for this filter")
    return grid_golden_max(lambda h: l1_norm(filt, h), 0.0, hurst_domain(filt), step, rel_tol)


@lru_cache(maxsize=256)
def _kappa(key):
    return 2.0 * sup_l1_norm(Filter(key))[1]


def kappa(filt) -> float:
    """``2 sup_H ||rho_H^a||_1`` (memoised on the coefficients)."""
    return _kappa(as_filter(filt).key())
