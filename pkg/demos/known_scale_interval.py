"""Simulate one fBm path and compare the four known-scale procedures.

    python3 demos/known_scale_interval.py [H] [n]
"""
import sys

from hurst_ci.fbm_sim import SimConfig, simulate
from hurst_ci.intervals import ci_bnp, ci_clt_known, ci_known_scale

H = float(sys.argv[1]) if len(sys.argv) > 1 else 0.7
n = int(sys.argv[2]) if len(sys.argv) > 2 else 2000

path = simulate(SimConfig(H=H, n=n, seed=1))
print(f"true H = {H}, n = {n}")
for label, ci in [
    ("concentration, i2", ci_known_scale(path, "i2", 0.05)),
    ("concentration, d4", ci_known_scale(path, "d4", 0.05)),
    ("CLT, i2", ci_clt_known(path, "i2", 0.05)),
    ("baseline, H* = 0.8", ci_bnp(path, 0.05, 0.8)),
]:
    if ci.feasible:
        print(f"  {label:20s} [{ci.lower:.4f}, {ci.upper:.4f}]  length {ci.length:.4f}")
    else:
        print(f"  {label:20s} not available: {ci.diagnostics['reason']}")
