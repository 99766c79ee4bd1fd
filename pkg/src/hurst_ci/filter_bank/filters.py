"""Finite filters, their dilations and the covariance of filtered fBm."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import comb

import numpy as np

ORDER_ATOL = 1e-10


class FilterError(ValueError):
    """Invalid filter construction (bad order, degenerate coefficients)."""


class UnknownFilterError(LookupError):
    pass


@dataclass(frozen=True, eq=False)
class Filter:
    """Coefficients ``a_0..a_l`` of a filter with vanishing moments.

    ``order`` is the number ``p`` of vanishing moments and ``length_minus_one``
    is ``l``.  Leading zeros are trimmed on construction; trailing zeros are
    kept (they only matter for the index bookkeeping of filtered series).
    """

    coeffs: np.ndarray
    name: str = ""
    order: int = field(init=False)
    length_minus_one: int = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=float).ravel()
        nz = np.flatnonzero(a)
        if nz.size == 0:
            raise FilterError("filter has no non-zero coefficient")
        a = a[nz[0]:]
        if a.size < 2:
            raise FilterError("a filter needs at least two coefficients")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "order", detect_order(a))
        object.__setattr__(self, "length_minus_one", a.size - 1)

    @property
    def ell(self) -> int:
        return self.length_minus_one

    @property
    def p(self) -> int:
        return self.order

    def key(self) -> tuple:
        return tuple(float(c) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Filter) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        label = self.name or "Filter"
        return f"<{label} p={self.order} l={self.length_minus_one} {np.array2string(self.coeffs, precision=6)}>"


def detect_order(coeffs) -> int:
    """Number of vanishing moments of ``coeffs`` (absolute tolerance 1e-10)."""
    a = np.asarray(coeffs, dtype=float).ravel()
    q = np.arange(a.size, dtype=float)
    for j in range(a.size):
        if abs(np.dot(q**j, a)) > ORDER_ATOL:
            if j == 0:
                raise FilterError("coefficients do not sum to zero: not a filter of order >= 1")
            return j
    raise FilterError("all moments vanish: degenerate filter")


def make_increment_filter(p: int) -> Filter:
    """Signed binomial filter ``(1 - B)^p``; ``p=1`` gives ``{-1, 1}``."""
    if int(p) != p or p < 1:
        raise FilterError(f"invalid order {p!r}: need an integer >= 1")
    p = int(p)
    return Filter([(-1) ** (p - k) * comb(p, k) for k in range(p + 1)], name=f"i{p}")


def dilate(filt: Filter, m: int) -> Filter:
    """Insert ``m - 1`` zeros between consecutive coefficients."""
    if int(m) != m or m < 1:
        raise FilterError(f"dilation factor must be a positive integer, got {m!r}")
    m = int(m)
    if m == 1:
        return filt
    out = np.zeros(m * filt.ell + 1)
    out[::m] = filt.coeffs
    name = f"({filt.name})^{m}" if filt.name else ""
    return Filter(out, name=name)


@lru_cache(maxsize=None)
def _table():
    rows = {}
    text = resources.files("hurst_ci.filter_bank").joinpath("data/filters.csv").read_text()
    for rec in csv.reader(line for line in text.splitlines() if line and not line.startswith("#")):
        name, p, *coeffs, source = rec
        rows[name] = (int(p), tuple(float(c) for c in coeffs), source)
    return rows


def builtin_names() -> list[str]:
    return list(_table())


def filter_source(name: str) -> str:
    return _table()[name][2]


def builtin_filter(name: str) -> Filter:
    """Named filter from the shipped table (i1..i4, d4, d6, d8, s8, c6, c12).

    A suffix ``^m`` selects the m-th dilation, e.g. ``"i2^2"``.
    """
    base, _, m = name.partition("^")
    try:
        p, coeffs, _ = _table()[base]
    except KeyError:
        raise UnknownFilterError(f"unknown filter {name!r}; known: {', '.join(_table())}") from None
    filt = Filter(coeffs, name=base)
    if filt.order != p:
        raise FilterError(f"table entry {base!r} lists p={p} but coefficients have order {filt.order}")
    return dilate(filt, int(m)) if m else filt


def as_filter(f) -> Filter:
    if isinstance(f, Filter):
        return f
    if isinstance(f, str):
        return builtin_filter(f)
    return Filter(f)


def alpha_profile(filt: Filter) -> np.ndarray:
    """Autocorrelation ``alpha_j = sum_{q-r=j} a_q a_r`` for ``j = -l..l``."""
    return np.correlate(filt.coeffs, filt.coeffs, mode="full")


def _cross_weights(a: np.ndarray, m1: int, m2: int):
    """Offsets ``j`` and weights of ``sum_{m1 q - m2 r = j} a_q a_r``."""
    q = np.arange(a.size)
    offs = (m1 * q[:, None] - m2 * q[None, :]).ravel()
    w = np.outer(a, a).ravel()
    uniq, inv = np.unique(offs, return_inverse=True)
    weights = np.zeros(uniq.size)
    np.add.at(weights, inv, w)
    keep = weights != 0.0
    return uniq[keep], weights[keep]


def _powabs(x, two_h):
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        return np.where(x == 0.0, 0.0, x ** two_h)


def _xlogx2(x):
    """``x^2 log|x|`` with ``0 log 0 = 0``."""
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x == 0.0, 0.0, x * x * np.log(np.where(x == 0.0, 1.0, x)))


def tau_a(filt: Filter) -> float:
    """``sum_{q,r} a_q a_r (q - r)^2 log|q - r|`` with ``0 log 0 = 0``."""
    filt = as_filter(filt)
    offs, w = _cross_weights(filt.coeffs, 1, 1)
    return float(_xlogx2(offs) @ w)
