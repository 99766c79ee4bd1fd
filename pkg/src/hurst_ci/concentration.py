"""Concentration bounds for normalised Gaussian quadratic variations.

For ``Z = sqrt(n) V_n`` with correlation ``rho`` and ``kappa = 2 ||rho||_1``,

    P(Z >= t)  <= exp(-t sqrt(n)/kappa) (1 + t/sqrt(n))^(n/kappa)
    P(Z <= -t) <= exp( t sqrt(n)/kappa) (1 - t/sqrt(n))^(n/kappa),  t < sqrt(n).

These are the ``(a, b) = (2 kappa/sqrt(n), 2 kappa)`` instances of the
general bounds for a second-chaos variable with ``|DZ|^2 <= aZ + b``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

INVERSION_ATOL = 1e-12


@dataclass(frozen=True)
class GeneralBoundParams:
    """Constants of ``|DZ|^2 <= a Z + b``."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a >= 0:
            raise ValueError(f"a must be >= 0, got {self.a}")
        if not self.b > 0:
            raise ValueError(f"b must be > 0, got {self.b}")

    @classmethod
    def from_nv(cls, alpha: float, beta: float) -> "GeneralBoundParams":
        """From the ``g_Z(Z) <= alpha Z + beta`` form, where ``a = 2 alpha, b = 2 beta``."""
        return cls(2.0 * alpha, 2.0 * beta)

    @property
    def left_endpoint(self) -> float:
        return math.inf if self.a == 0 else self.b / self.a


@dataclass(frozen=True)
class ConcentrationBound:
    kappa: float
    n_eff: int

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if int(self.n_eff) != self.n_eff or self.n_eff < 1:
            raise ValueError(f"n_eff must be a positive integer, got {self.n_eff}")

    def general(self) -> GeneralBoundParams:
        s = math.sqrt(self.n_eff)
        return GeneralBoundParams(2.0 * self.kappa / s, 2.0 * self.kappa)


# ---------------------------------------------------------------------------
# log-bounds in the (a, b) parametrisation
#
#   log phi_r = -2t/a + (2b/a^2) log1p(a t / b)
#   log phi_l =  2t/a + (2b/a^2) log1p(-a t / b)
#
# Both are -t^2/(2b) + O(a t^3) for small a; when a t / b is tiny we use the
# series to avoid cancelling two huge terms.

def _series(u, sign, terms=40):
    # log1p(y) - y = sum_{k>=2} (-1)^{k+1} y^k / k  with y = sign * u
    total = 0.0
    for k in range(2, terms):
        term = (-1) ** (k + 1) * (sign * u) ** k / k
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-300):
            break
    return total


def _log_phi(t, params: GeneralBoundParams, sign):
    a, b = params.a, params.b
    t = float(t)
    if t <= 0:
        return 0.0
    if a == 0.0:
        return -t * t / (2.0 * b)
    x = a * t / b
    if sign < 0 and x >= 1.0:
        return -math.inf
    scale = 2.0 * b / (a * a)
    if x < 1e-3:
        return scale * _series(x, sign)
    return -sign * 2.0 * t / a + scale * math.log1p(sign * x)


def phi_r_general(t, params: GeneralBoundParams) -> float:
    return math.exp(_log_phi(t, params, +1))


def phi_l_general(t, params: GeneralBoundParams) -> float:
    """Zero for ``t >= b/a`` (the left tail cannot go beyond ``-b/a``)."""
    return math.exp(_log_phi(t, params, -1))


def phi_r(t, bound: ConcentrationBound) -> float:
    """``exp(-t sqrt(n)/kappa) (1 + t/sqrt(n))^(n/kappa)``."""
    return phi_r_general(t, bound.general())


def phi_l(t, bound: ConcentrationBound) -> float:
    """``exp(t sqrt(n)/kappa) (1 - t/sqrt(n))^(n/kappa)`` on ``[0, sqrt(n))``, else 0."""
    return phi_l_general(t, bound.general())


def nv_phi_r(t, params: GeneralBoundParams) -> float:
    """Earlier right-tail bound ``exp(-t^2/(a t + b))``."""
    t = float(t)
    return math.exp(-t * t / (params.a * t + params.b)) if t > 0 else 1.0


def nv_phi_l(t, params: GeneralBoundParams) -> float:
    """Earlier left-tail bound ``exp(-t^2/b)``."""
    t = float(t)
    return math.exp(-t * t / params.b) if t > 0 else 1.0


# ---------------------------------------------------------------------------
# inverses

def _check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _bisect(logf, log_alpha, lo, hi, atol):
    # logf decreasing, logf(lo) >= log_alpha > logf(hi)
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if logf(mid) >= log_alpha:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def q_asymptotic(alpha, kappa) -> float:
    """``sqrt(2 kappa log(1/alpha))``: the large-n limit of both inverses."""
    alpha = _check_alpha(alpha)
    return math.sqrt(2.0 * kappa * math.log(1.0 / alpha))


def _invert_r(alpha, params: GeneralBoundParams, logf):
    alpha = _check_alpha(alpha)
    la = math.log(alpha)
    # b = 2 kappa, so sqrt(b log(1/alpha)) is the asymptotic quantile
    hi = math.sqrt(params.b * math.log(1.0 / alpha))
    while logf(hi) >= la:
        hi *= 2.0
    return _bisect(logf, la, 0.0, hi, INVERSION_ATOL)


def _invert_l(alpha, params: GeneralBoundParams, logf):
    alpha = _check_alpha(alpha)
    hi = params.left_endpoint
    if math.isinf(hi):
        hi = math.sqrt(params.b * math.log(1.0 / alpha))
        while logf(hi) >= math.log(alpha):
            hi *= 2.0
    return _bisect(logf, math.log(alpha), 0.0, hi, INVERSION_ATOL)


def invert_phi_r_general(alpha, params: GeneralBoundParams) -> float:
    return _invert_r(alpha, params, lambda t: _log_phi(t, params, +1))


def invert_phi_l_general(alpha, params: GeneralBoundParams) -> float:
    return _invert_l(alpha, params, lambda t: _log_phi(t, params, -1))


def invert_phi_r(alpha, bound: ConcentrationBound) -> float:
    """Unique ``t > 0`` with ``phi_r(t) = alpha`` (bisection, 1e-12 in t)."""
    return invert_phi_r_general(alpha, bound.general())


def invert_phi_l(alpha, bound: ConcentrationBound) -> float:
    """Unique ``t`` in ``(0, sqrt(n_eff))`` with ``phi_l(t) = alpha``."""
    return invert_phi_l_general(alpha, bound.general())


def invert_nv_phi_r(alpha, params: GeneralBoundParams) -> float:
    """Positive root of ``t^2 = L (a t + b)`` with ``L = log(1/alpha)``."""
    L = math.log(1.0 / _check_alpha(alpha))
    return 0.5 * (params.a * L + math.sqrt((params.a * L) ** 2 + 4.0 * params.b * L))


def invert_nv_phi_l(alpha, params: GeneralBoundParams) -> float:
    return math.sqrt(params.b * math.log(1.0 / _check_alpha(alpha)))


def quantiles(alpha, kappa, n_eff):
    """``(q_l, q_r)`` at level ``alpha`` for ``kappa`` and effective size ``n_eff``."""
    bound = ConcentrationBound(float(kappa), int(n_eff))
    return invert_phi_l(alpha, bound), invert_phi_r(alpha, bound)


__all__ = [
    "ConcentrationBound", "GeneralBoundParams", "phi_r", "phi_l", "phi_r_general", "phi_l_general",
    "nv_phi_r", "nv_phi_l", "invert_phi_r", "invert_phi_l", "invert_phi_r_general",
    "invert_phi_l_general", "invert_nv_phi_r", "invert_nv_phi_l", "q_asymptotic", "quantiles",
]
