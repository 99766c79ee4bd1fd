"""Monte-Carlo coverage of the interval procedures.

Replication ``r`` always draws from the stream ``(seed, r)``, and the per-rep
results are stored by index before aggregation, so the output does not depend
on how the work is split across processes.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ..fbm_sim import SimConfig, simulate
from .. import intervals as iv

WORKERS_ENV = "HURST_CI_WORKERS"
METHOD_ALIASES = {
    "ci-known": "CI-known", "ci-unknown": "CI-unknown", "bnp": "BNP",
    "clt-known": "CLT-known", "clt-unknown": "CLT-unknown",
}


def canonical_method(method: str) -> str:
    m = METHOD_ALIASES.get(method.lower(), method)
    if m not in iv.METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHOD_ALIASES)}")
    return m


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        w = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return max(1, w)


def interval_for(method, path, filt="i2", alpha=0.05, M=2, C=1.0, h_star=0.8, d=None):
    """Dispatch to the interval constructor named by ``method``."""
    method = canonical_method(method)
    if method == "CI-known":
        return iv.ci_known_scale(path, filt, alpha, C=C)
    if method == "CLT-known":
        return iv.ci_clt_known(path, filt, alpha, C=C)
    if method == "CI-unknown":
        design = iv.DilationDesign(int(M), d) if d is not None else iv.DilationDesign.regression(M)
        return iv.ci_unknown_scale(path, filt, design, alpha)
    if method == "CLT-unknown":
        return iv.ci_clt_unknown(path, filt, M, alpha)
    return iv.ci_bnp(path, alpha, h_star)


@dataclass(frozen=True)
class CoverageRecord:
    method: str
    filter: str
    n: int
    H: float
    coverage: float | None
    mean_length: float | None
    mean_midpoint: float | None
    reps: int
    feasible_rate: float
    wall_time: float
    M: int | None = None
    alpha: float = 0.05

    def __post_init__(self):
        if self.coverage is not None and not 0.0 <= self.coverage <= 100.0:
            raise ValueError(f"coverage out of range: {self.coverage}")

    def to_dict(self):
        return asdict(self)


def _one(task):
    method, filt, n, H, C, alpha, M, h_star, seed, rep = task
    if method == "BNP":
        # the baseline observes B(i/n), i = 0..n+1: simulate n + 2 points on the
        # grid 1/(n+2) and stretch time by self-similarity
        path = simulate(SimConfig(H=H, C=C, n=n + 2, seed=seed), rep=rep)
        path = path.scaled(((n + 2) / n) ** H / C)
    else:
        path = simulate(SimConfig(H=H, C=C, n=n, seed=seed), rep=rep)
    try:
        ci = interval_for(method, path, filt, alpha, M, C, h_star)
    except iv.EstimatorDomainError:
        return (0.0, 0.0, math.nan, math.nan)
    if not ci.feasible:
        return (0.0, 0.0, math.nan, math.nan)
    # the reported H-hat is the interval midpoint for every method
    return (1.0, float(ci.contains(H)), ci.length, ci.midpoint)


def _chunk(tasks):
    return [_one(t) for t in tasks]


def run_coverage(method, filt="i2", n=500, H=0.5, C=1.0, alpha=0.05, reps=500, seed=0,
                 parallelism=None, M=2, h_star=0.8) -> CoverageRecord:
    method = canonical_method(method)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if not 0.0 < H < 1.0:
        raise ValueError(f"H must lie in (0, 1), got {H}")
    workers = default_workers() if parallelism is None else max(1, int(parallelism))
    name = filt if isinstance(filt, str) else getattr(filt, "name", "custom")
    tasks = [(method, filt, int(n), float(H), float(C), float(alpha), int(M), float(h_star), int(seed), r)
             for r in range(reps)]
    t0 = time.perf_counter()
    if workers == 1 or reps < 2:
        rows = _chunk(tasks)
    else:
        size = max(1, math.ceil(reps / (4 * workers)))
        chunks = [tasks[i:i + size] for i in range(0, reps, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [row for part in pool.map(_chunk, chunks) for row in part]
    wall = time.perf_counter() - t0
    res = np.array(rows)
    ok = res[:, 0] > 0
    k = int(ok.sum())
    cov = 100.0 * math.fsum(res[ok, 1]) / k if k else None
    length = math.fsum(res[ok, 2]) / k if k else None
    est = math.fsum(res[ok, 3]) / k if k else None
    return CoverageRecord(method, name, int(n), float(H), cov, length, est, reps, k / reps, wall,
                          int(M) if method.endswith("unknown") else None, float(alpha))
