"""Grid search followed by golden-section refinement on a compact interval."""
from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, rel_tol=1e-8, max_iter=200):
    """Maximise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    scipy's ``golden`` wants a strict bracketing triple and has no bounds, which
    does not fit maxima sitting on an endpoint, so we keep a bounded variant.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= rel_tol * max(1.0, abs(a), abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    fx, x = max(best)
    return x, fx


def grid_golden_max(f, lo, hi, step=1e-3, rel_tol=1e-8):
    """Global-ish maximum: evaluate on a grid, then refine around the best node."""
    n = max(2, int(round((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, n)
    vals = np.array([f(x) for x in grid])
    k = int(np.nanargmax(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, n - 1)]
    x, fx = golden_max(f, a, b, rel_tol=rel_tol)
    if vals[k] >= fx:
        return float(grid[k]), float(vals[k])
    return float(x), float(fx)
