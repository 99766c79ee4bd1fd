"""Filtered series and quadratic variations of an observed path."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filter_bank import Filter, as_filter, pi


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class FilteredSeries:
    values: np.ndarray
    filter_ref: Filter
    n: int


@dataclass(frozen=True)
class QuadraticVariation:
    s_n: float
    filter_ref: Filter
    n: int
    count: int


def _values(path):
    return np.asarray(getattr(path, "values", path), dtype=float)


def filter_series(path, filt) -> FilteredSeries:
    """``V(i/n) = sum_q a_q B((i - q)/n)`` for ``i = l..n-1``."""
    filt = as_filter(filt)
    x = _values(path)
    if x.size <= filt.ell:
        raise InsufficientDataError(f"need more than {filt.ell} observations, got {x.size}")
    return FilteredSeries(np.convolve(x, filt.coeffs, mode="valid"), filt, x.size)


def quadratic_variation(path, filt) -> QuadraticVariation:
    """Mean of squared filtered values over the ``n - l`` valid indices."""
    fs = filter_series(path, filt)
    v = fs.values
    return QuadraticVariation(math.fsum(v * v) / v.size, fs.filter_ref, fs.n, v.size)


def v_n(path, filt, H, C=1.0) -> float:
    """``n^{2H} S_n / (C^2 pi_H(0)) - 1``: zero-mean under the true (H, C)."""
    qv = quadratic_variation(path, filt)
    return qv.n ** (2.0 * H) * qv.s_n / (C * C * pi(qv.filter_ref, H, 0)) - 1.0
