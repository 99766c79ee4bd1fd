"""Interval container, dilation designs and cached per-filter constants."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..concentration import quantiles
from ..filter_bank import Filter, dilate, kappa

METHODS = ("CI-known", "CI-unknown", "BNP", "CLT-known", "CLT-unknown")


class DesignError(ValueError):
    pass


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    method: str
    feasible: bool = True
    estimator: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if self.feasible and not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, h) -> bool:
        return self.feasible and self.lower <= h <= self.upper

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "alpha": round(1.0 - self.level, 15),
            "lower": self.lower if self.feasible else None,
            "upper": self.upper if self.feasible else None,
            "feasible": self.feasible,
            "estimator": self.estimator,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def infeasible(cls, method, alpha, reason, **diag):
        return cls(0.0, 1.0, 1.0 - alpha, method, False, None, {"reason": reason, **diag})


@dataclass(frozen=True)
class DilationDesign:
    """Weights ``d`` over the dilations ``m = 1..M`` (sum zero, ``d.L_M > 0``)."""

    M: int
    d: np.ndarray = None

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise DesignError(f"M must be an integer >= 2, got {self.M}")
        L = self.L_M
        d = L - L.mean() if self.d is None else np.asarray(self.d, dtype=float).ravel()
        if d.size != self.M:
            raise DesignError(f"d has {d.size} components, expected M={self.M}")
        if np.any(d == 0):
            raise DesignError("all components of d must be non-zero")
        if abs(d.sum()) > 1e-12 * np.abs(d).sum():
            raise DesignError(f"components of d must sum to zero (sum={d.sum():.3e})")
        if not d @ L > 0:
            raise DesignError("d must satisfy d.L_M > 0")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def L_M(self) -> np.ndarray:
        return np.log(np.arange(1, int(self.M) + 1, dtype=float))

    @property
    def I_minus(self) -> tuple:
        return tuple(int(i) + 1 for i in np.flatnonzero(self.d < 0))

    @property
    def I_plus(self) -> tuple:
        return tuple(int(i) + 1 for i in np.flatnonzero(self.d > 0))

    @classmethod
    def regression(cls, M) -> "DilationDesign":
        """``d = A = L_M - mean(L_M)``."""
        return cls(int(M))


@lru_cache(maxsize=1024)
def cached_quantiles(alpha: float, kap: float, n_eff: int):
    return quantiles(alpha, kap, n_eff)


def kappa_dilated(filt: Filter, m: int) -> float:
    return kappa(dilate(filt, m))


def normal_quantile(p: float) -> float:
    from scipy.stats import norm

    return float(norm.ppf(p))
