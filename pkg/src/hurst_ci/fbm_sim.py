"""Exact simulation of fractional Brownian motion on the grid ``i/n``.

Fractional Gaussian noise is generated by circulant embedding: its
autocovariance ``gamma(0..n-2)`` is embedded in a circulant matrix of size
``2(n - 1)``, whose eigenvalues (one FFT) are non-negative for every H, so
the resulting Gaussian vector has exactly the right law.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

NEG_EIG_RTOL = 1e-9


class EmbeddingError(RuntimeError):
    """The circulant embedding has a genuinely negative eigenvalue."""


@dataclass(frozen=True)
class SimConfig:
    H: float
    C: float = 1.0
    n: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.H < 1.0:
            raise ValueError(f"H must lie in (0, 1), got {self.H}")
        if not self.C > 0:
            raise ValueError(f"C must be > 0, got {self.C}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SamplePath:
    """Observations ``B_H(i/n)``, ``i = 0..n-1``."""

    values: np.ndarray
    n: int
    step: float
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, values, step=None, **meta):
        v = np.asarray(values, dtype=float)
        return cls(v, v.size, 1.0 / v.size if step is None else float(step), dict(meta))

    def scaled(self, c) -> "SamplePath":
        return SamplePath(self.values * c, self.n, self.step, dict(self.meta))


def fgn_autocovariance(H, C, n, k):
    """Covariance of ``B_H((i+1)/n) - B_H(i/n)`` at lag ``k`` (vectorised)."""
    k = np.abs(np.asarray(k, dtype=float))
    two_h = 2.0 * H
    g = 0.5 * (np.abs(k + 1) ** two_h - 2.0 * k**two_h + np.abs(k - 1) ** two_h)
    out = C * C * g / float(n) ** two_h
    return float(out) if out.ndim == 0 else out


def rng_for(seed: int, rep: int = 0) -> np.random.Generator:
    """Independent stream for replication ``rep`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(rep),)))


def circulant_eigenvalues(H, m):
    """Eigenvalues of the size-``2m`` circulant embedding of unit fGn of length ``m``."""
    gamma = fgn_autocovariance(H, 1.0, 1, np.arange(m + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    lo = lam.min()
    if lo < -NEG_EIG_RTOL * lam.max():
        raise EmbeddingError(f"circulant embedding not non-negative definite (min eigenvalue {lo:.3e})")
    return np.maximum(lam, 0.0)


def fgn(H, size, rng: np.random.Generator):
    """``size`` values of unit-step fractional Gaussian noise (C = 1, n = 1)."""
    if size == 1:
        return rng.standard_normal(1)
    # gamma(0..size) embedded in a circulant of size 2 * size; for the n - 1
    # increments of an n-point path this is 2(n - 1)
    lam = circulant_eigenvalues(H, size)
    N = lam.size
    z = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    y = np.fft.fft(np.sqrt(lam / N) * z)
    return y.real[:size]


def simulate(config: SimConfig, rep: int = 0) -> SamplePath:
    """Exact-in-law path ``B_H(i/n)``, ``i = 0..n-1``; deterministic in (seed, rep)."""
    rng = rng_for(config.seed, rep)
    incr = fgn(config.H, config.n - 1, rng)
    scale = config.C * float(config.n) ** (-config.H)
    values = np.empty(config.n)
    values[0] = 0.0
    np.cumsum(incr * scale, out=values[1:])
    meta = {"H": config.H, "C": config.C, "seed": int(config.seed), "rep": int(rep)}
    return SamplePath(values, config.n, 1.0 / config.n, meta)


# ---------------------------------------------------------------------------
# CSV IO

def path_to_csv(path: SamplePath, stream=None):
    m = path.meta
    header = f"# H={m.get('H', '')},C={m.get('C', '')},n={path.n},seed={m.get('seed', '')}"
    out = stream if stream is not None else io.StringIO()
    out.write(header + "\n")
    for v in path.values:
        out.write(f"{float(v)!r}\n")
    return out.getvalue() if stream is None else None


def _parse_header(line):
    meta = {}
    for item in line.lstrip("#").strip().split(","):
        key, _, val = item.partition("=")
        key, val = key.strip(), val.strip()
        if not key or val == "":
            continue
        try:
            meta[key] = int(val) if key in ("n", "seed") else float(val)
        except ValueError:
            meta[key] = val
    return meta


def path_from_csv(text_or_stream) -> SamplePath:
    """Read a path written by :func:`path_to_csv` (header optional)."""
    text = text_or_stream if isinstance(text_or_stream, str) else text_or_stream.read()
    meta, vals = {}, []
    for rec in csv.reader(io.StringIO(text)):
        if not rec or not rec[0].strip():
            continue
        if rec[0].lstrip().startswith("#"):
            meta.update(_parse_header(",".join(rec)))
            continue
        vals.append(float(rec[-1]))
    n = meta.pop("n", None)
    if n is not None and n != len(vals):
        raise ValueError(f"header says n={n} but file has {len(vals)} values")
    return SamplePath.from_values(vals, **meta)
