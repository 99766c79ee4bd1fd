"""Covariance, correlation and correlation norms of filtered fBm.

All quantities reduce to sums of the form ``f(k) = sum_j w_j |k + j|^{2H}``
over a finite set of offsets ``j``.  Near the origin ``f`` is summed
directly.  Far from it, direct evaluation cancels catastrophically (the
terms are ``O(k^{2H})`` while ``f(k) = O(k^{2H-2p})``), so for
``|k| >= J > max|j|`` we use the binomial expansion

    f(k) = sum_{h >= 2p} binom(2H, h) B_h k^{2H-h},   B_h = sum_j w_j j^h,

which converges geometrically because ``max|j| / J <= 1/4``.  Tails of
``sum |f|`` and ``sum f^2`` then become finite combinations of Hurwitz zeta
values.  Once the leading term dominates the rest of the expansion at
``k = J`` the sign of ``f`` is constant on the tail, which is what makes the
modulus removable.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import zeta

from .filters import Filter, FilterError, _cross_weights, _powabs, _xlogx2, alpha_profile, as_filter, tau_a

DEFAULT_REL_TOL = 1e-10


class NotSummableError(ValueError):
    """The requested norm diverges for this (filter, H)."""


class UndefinedLimitError(ValueError):
    """The H -> 1 limit of the correlation is 0/0 (tau^a = 0)."""


# --------------------------------------------------------------------------
# kernel: offsets/weights for one (filter, m1, m2) triple

class _Kernel:
    def __init__(self, coeffs, m1, m2, p):
        self.offsets, self.weights = _cross_weights(np.asarray(coeffs), m1, m2)
        self.R = int(np.max(np.abs(self.offsets)))
        self.h0 = 2 * p
        self.wsum = float(np.abs(self.weights).sum())
        self._moments = {}

    def moments(self, J, rel):
        """(h, B_h) for h = h0..hmax with the truncated remainder below rel."""
        key = (J, rel)
        if key not in self._moments:
            ratio = self.R / J
            hmax = self.h0 + 2
            while ratio ** (hmax + 1 - self.h0) > rel * 1e-3 and hmax < 400:
                hmax += 1
            hs = np.arange(self.h0, hmax + 1)
            off = self.offsets.astype(float)
            B = np.array([float(np.dot(self.weights, off ** h)) for h in hs])
            self._moments[key] = (hs, B)
        return self._moments[key]

    def direct(self, H, ks, deriv=False):
        ks = np.asarray(ks, dtype=float)
        x = ks[:, None] + self.offsets[None, :]
        if deriv:
            return 2.0 * (_xlogx2(x) @ self.weights)
        if self.h0 >= 4:
            # sum_j w_j (k+j)^2 = 0 here, so subtract it termwise; this keeps
            # full relative accuracy as H -> 1 where f is O(1 - H).
            return _x2expm1(x, H) @ self.weights
        return _powabs(x, 2.0 * H) @ self.weights


def _x2expm1(x, H):
    """``|x|^{2H} - x^2`` computed without cancellation near H = 1."""
    ax = np.abs(np.asarray(x, dtype=float))
    lg = np.log(np.where(ax == 0.0, 1.0, ax))
    return ax * ax * np.expm1((2.0 * H - 2.0) * lg)


@lru_cache(maxsize=512)
def _kernel(key, m1, m2, p):
    return _Kernel(key, m1, m2, p)


def _kernel_for(filt: Filter, m1=1, m2=1):
    return _kernel(filt.key(), int(m1), int(m2), filt.order)


def _series_coeffs(H, hs, deriv):
    """``binom(2H, h)`` (or its H-derivative at H=1) and the power of ``1/k``."""
    if deriv:
        c = np.empty(hs.size)
        for i, h in enumerate(hs):
            h = int(h)
            if h == 0:
                c[i] = 0.0
            elif h == 1:
                c[i] = 2.0
            elif h == 2:
                c[i] = 3.0
            else:
                c[i] = 4.0 * (-1) ** (h - 3) * factorial(h - 3) / factorial(h)
        return c, hs - 2.0
    x = 2.0 * H
    h_first = int(hs[0])
    c0 = 1.0
    for i in range(h_first):
        c0 *= (x - i) / (i + 1)
    c = np.empty(hs.size)
    c[0] = c0
    for i in range(1, hs.size):
        h = h_first + i - 1
        c[i] = c[i - 1] * (x - h) / (h + 1)
    return c, hs - x


class _Tail:
    """Series representation of ``f`` on ``|k| >= J``."""

    def __init__(self, kern: _Kernel, H, J, rel, deriv):
        self.J = J
        hs, B = kern.moments(J, rel)
        self.hs = hs
        c, s = _series_coeffs(H, hs, deriv)
        self.s = s
        self.t_pos = c * B
        self.t_neg = self.t_pos * np.where(hs % 2 == 0, 1.0, -1.0)
        # crude bound on everything beyond hmax
        e = 2.0 if deriv else 2.0 * H
        q = kern.R / J
        self.remainder = abs(c[-1]) * kern.wsum * J ** e * q ** (hs[-1] + 1) / (1.0 - q) * (1.0 + J)
        self.zero = np.all(self.t_pos == 0.0)

    def certified(self):
        """True if the leading term dominates the rest for all |k| >= J."""
        if self.zero:
            return True
        lead = abs(self.t_pos[0]) * self.J ** (-self.s[0])
        if lead == 0.0:
            return False
        rest = np.sum(np.abs(self.t_pos[1:]) * self.J ** (-self.s[1:])) + self.remainder
        return rest < 0.5 * lead

    def values(self, ks):
        ks = np.asarray(ks, dtype=float)
        out = np.empty(ks.size)
        pos = ks > 0
        ak = np.abs(ks)
        powers = ak[:, None] ** (-self.s[None, :])
        out[pos] = powers[pos] @ self.t_pos
        out[~pos] = powers[~pos] @ self.t_neg
        return out

    def sum_side(self, sign):
        t = self.t_pos if sign > 0 else self.t_neg
        if self.zero:
            return 0.0
        return float(np.dot(t, zeta(self.s, self.J)))

    def sum_sq_side(self, sign):
        t = self.t_pos if sign > 0 else self.t_neg
        if self.zero:
            return 0.0
        ss = self.s[:, None] + self.s[None, :]
        return float(np.sum(np.outer(t, t) * zeta(ss, self.J)))

    def abs_bound(self):
        """Upper bound on ``sum_{|k|>=J} |f(k)|`` (both sides)."""
        if self.zero:
            return 0.0
        return 2.0 * float(np.sum(np.abs(self.t_pos) * zeta(self.s, self.J)) + self.remainder)


def _pick_tail(kern, H, rel, deriv, need_sign=True):
    J = max(4 * kern.R + 8, 16)
    while True:
        tail = _Tail(kern, H, J, rel, deriv)
        if not need_sign or tail.certified() or J > 1 << 22:
            return tail
        J *= 2


def _f(kern, H, ks, deriv, rel=DEFAULT_REL_TOL):
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    tail = _pick_tail(kern, H, rel, deriv, need_sign=False)
    out = np.empty(ks.size)
    near = np.abs(ks) < tail.J
    if near.any():
        out[near] = kern.direct(H, ks[near], deriv)
    if (~near).any():
        out[~near] = tail.values(ks[~near])
    return out


def _check_h(H):
    H = float(H)
    if not 0.0 <= H <= 1.0:
        raise ValueError(f"H must lie in [0, 1], got {H}")
    return H


def _use_limit(filt, H):
    """True if H = 1 must be handled through the l'Hospital limit."""
    if H == 1.0 and filt.order >= 2:
        if abs(tau_a(filt)) < 1e-14:
            raise UndefinedLimitError("H = 1 limit undefined: tau^a = 0")
        return True
    return False


# --------------------------------------------------------------------------
# covariance and correlation

def pi(filt, H, j):
    """``pi_H^a(j) = -1/2 sum_{q,r} a_q a_r |q - r + j|^{2H}`` (vectorised in ``j``).

    At H = 1 the value is identically zero for filters of order p >= 2.
    """
    filt = as_filter(filt)
    H = _check_h(H)
    scalar = np.ndim(j) == 0
    ks = np.atleast_1d(np.asarray(j))
    if H == 1.0 and filt.order >= 2:
        out = np.zeros(ks.size)
    else:
        out = -0.5 * _f(_kernel_for(filt), H, ks, False)
    return float(out[0]) if scalar else out


def cross_pi(filt, m1, m2, H, i):
    """``-1/2 sum a_q a_r |m1 q - m2 r + i|^{2H}``."""
    filt = as_filter(filt)
    H = _check_h(H)
    scalar = np.ndim(i) == 0
    ks = np.atleast_1d(np.asarray(i))
    out = -0.5 * _f(_kernel_for(filt, m1, m2), H, ks, False)
    return float(out[0]) if scalar else out


def _normaliser(filt, m1, m2, H, deriv):
    f1 = _f(_kernel_for(filt, m1, m1), H, [0], deriv)[0]
    f2 = f1 if m1 == m2 else _f(_kernel_for(filt, m2, m2), H, [0], deriv)[0]
    # pi(0) = -f(0)/2 > 0 in the plain case; in the limit case the
    # factor (H - 1) flips the sign, so f'(0) > 0.
    mag = np.sqrt(f1 * f2)
    return mag if deriv else -mag


def cross_rho(filt, m1, m2, H, i):
    """Cross-correlation of the ``a^{m1}`` and ``a^{m2}`` filtered series at lag ``i``."""
    filt = as_filter(filt)
    H = _check_h(H)
    deriv = _use_limit(filt, H)
    scalar = np.ndim(i) == 0
    ks = np.atleast_1d(np.asarray(i))
    out = _f(_kernel_for(filt, m1, m2), H, ks, deriv) / _normaliser(filt, m1, m2, H, deriv)
    return float(out[0]) if scalar else out


def rho(filt, H, j):
    """``rho_H^a(j) = pi_H^a(j) / pi_H^a(0)``; the H = 1 value is the l'Hospital limit."""
    return cross_rho(filt, 1, 1, H, j)


# --------------------------------------------------------------------------
# norms

@dataclass(frozen=True)
class CorrelationProfile:
    filter_ref: Filter
    hurst: float
    values: dict
    l1_norm: float
    l2_norm_sq: float
    truncation_lag: int
    tail_bound: float


def _norms(filt, m1, m2, H, rel_tol, want_l1, left_limit=False):
    deriv = _use_limit(filt, H)
    kern = _kernel_for(filt, m1, m2)
    norm = _normaliser(filt, m1, m2, H, deriv)
    tail = _pick_tail(kern, H, rel_tol, deriv, need_sign=want_l1)
    if want_l1 and not tail.certified():
        raise RuntimeError("could not certify the sign of the correlation tail")
    J = tail.J
    ks = np.arange(-J + 1, J)
    vals = kern.direct(H, ks, deriv) / norm
    l2_tail = (tail.sum_sq_side(1) + tail.sum_sq_side(-1)) / norm**2
    l2 = float(np.sum(vals**2)) + l2_tail
    l1 = np.nan
    tail_bound = tail.abs_bound() / abs(norm)
    if want_l1:
        if left_limit and not tail.zero:
            raise ValueError("left limit is only meaningful where the tail vanishes")
        if left_limit:
            # p = 1, H -> 1/2-: each side of the tail tends to -B_2/2
            hs, B = kern.moments(J, rel_tol)
            side = -0.5 * B[0] / norm
            l1_tail = 2.0 * abs(side)
            tail_bound = l1_tail
        else:
            l1_tail = (abs(tail.sum_side(1)) + abs(tail.sum_side(-1))) / abs(norm)
        l1 = float(np.sum(np.abs(vals))) + l1_tail
    values = {int(k): float(v) for k, v in zip(ks, vals)}
    return CorrelationProfile(filt, H, values, l1, l2, int(J), float(tail_bound))


def rho_l1_norm(filt, H, rel_tol=DEFAULT_REL_TOL, *, left_limit=False) -> CorrelationProfile:
    """``sum_j |rho_H^a(j)|`` with lag values, truncation lag and tail bound.

    ``left_limit=True`` returns the limit H -> 1/2 from below, which differs
    from the value at 1/2 for order-1 filters.
    """
    filt = as_filter(filt)
    H = _check_h(H)
    if filt.order == 1 and H > 0.5:
        raise NotSummableError(f"rho is not summable for p=1 and H={H} > 1/2")
    if left_limit and not (filt.order == 1 and H == 0.5):
        left_limit = False
    return _norms(filt, 1, 1, H, rel_tol, True, left_limit)


def rho_l2_norm_sq(filt, H, rel_tol=DEFAULT_REL_TOL) -> float:
    """``sum_j rho_H^a(j)^2``."""
    filt = as_filter(filt)
    H = _check_h(H)
    if filt.order == 1 and H >= 0.75:
        raise NotSummableError(f"rho is not square-summable for p=1 and H={H} >= 3/4")
    return _norms(filt, 1, 1, H, rel_tol, False).l2_norm_sq


def cross_rho_l2_norm_sq(filt, m1, m2, H, rel_tol=DEFAULT_REL_TOL) -> float:
    """``sum_i cross_rho(a, m1, m2, H, i)^2``."""
    filt = as_filter(filt)
    H = _check_h(H)
    if filt.order == 1 and H >= 0.75:
        raise NotSummableError(f"not square-summable for p=1 and H={H} >= 3/4")
    return _norms(filt, m1, m2, H, rel_tol, False).l2_norm_sq


# --------------------------------------------------------------------------
# closed form for dilated increment filters

def increment_structure(filt):
    """``(p, m)`` if ``filt`` is proportional to a dilated increment filter, else None."""
    filt = as_filter(filt)
    a = filt.coeffs
    nz = np.flatnonzero(a)
    if nz[-1] != a.size - 1:
        return None
    m = int(np.gcd.reduce(nz)) if nz.size > 1 else 0
    if m == 0 or not np.all(a[np.setdiff1d(np.arange(a.size), nz)] == 0):
        return None
    p = (a.size - 1) // m
    if nz.size != p + 1 or not np.array_equal(nz, np.arange(0, a.size, m)):
        return None
    ref = np.array([(-1) ** (p - k) * float(_comb(p, k)) for k in range(p + 1)])
    scale = a[nz[0]] / ref[0]
    if not np.allclose(a[nz], scale * ref, rtol=1e-12, atol=0):
        return None
    return p, m


def _comb(n, k):
    from math import comb
    return comb(n, k)


def rho_l1_exact(filt, H, *, left_limit=False) -> float:
    """Finite closed form of ``||rho_H^a||_1`` for ``a = (i_p)^m`` (any scale).

    Beyond lag ``l`` the correlation of such filters has the constant sign
    ``(-1)^{p+1} sign(2H - 1)``, so the tail sum telescopes into partial sums
    ``S_k = sum_{j <= k} j^{2H}``.  At H = 1 the ratio is replaced by its
    l'Hospital limit; ``left_limit=True`` gives the H -> 1/2 limit from below.
    """
    filt = as_filter(filt)
    H = _check_h(H)
    st = increment_structure(filt)
    if st is None:
        raise FilterError("closed form only available for dilated increment filters")
    p, m = st
    if p == 1 and H > 0.5:
        raise NotSummableError(f"rho is not summable for p=1 and H={H} > 1/2")
    ell = filt.ell
    alpha = alpha_profile(filt)
    js = np.arange(-ell, ell + 1)
    deriv = _use_limit(filt, H)
    if deriv:
        # every term behaves like (1 - H) times -d/dH near H = 1
        g = lambda x: -2.0 * _xlogx2(x)
        eps = 1.0
    else:
        if p >= 2:
            # alpha annihilates cubics, so |x|^{2H} - x^2 gives the same
            # sums without the cancellation near H = 1
            g = lambda x: _x2expm1(x, H)
        else:
            g = lambda x: _powabs(x, 2.0 * H)
        eps = np.sign(2.0 * H - 1.0)
        if left_limit and H == 0.5:
            eps = -1.0
    pos = js >= 1
    D = -float(np.dot(alpha[pos], g(js[pos])))
    mid = sum(abs(float(np.dot(alpha, g(js + k)))) for k in range(1, ell))
    # S_{l+k-1} for k = -l+1..l
    S = np.concatenate([[0.0], np.cumsum(g(np.arange(1, 2 * ell)))])
    ks = np.arange(-ell + 1, ell + 1)
    tail = float(np.dot(alpha[ks + ell], S[ell + ks - 1]))
    return 1.0 + mid / D + (-1) ** (p + 1) * eps * tail / D
