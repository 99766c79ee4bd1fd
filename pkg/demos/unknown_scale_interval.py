"""Scale-free interval from several dilations of a filter.

The path is multiplied by an arbitrary constant: the interval does not move.
"""
import numpy as np

from hurst_ci.fbm_sim import SimConfig, simulate
from hurst_ci.intervals import DilationDesign, ci_clt_unknown, ci_unknown_scale, estimator_gen

path = simulate(SimConfig(H=0.3, C=4.2, n=20000, seed=7))
for M in (2, 3, 5):
    ci = ci_unknown_scale(path, "d4", DilationDesign.regression(M), 0.05)
    clt = ci_clt_unknown(path, "d4", M, 0.05)
    print(f"M={M}: estimate {estimator_gen(path, 'd4', M):.4f}  "
          f"concentration [{ci.lower:.4f}, {ci.upper:.4f}]  CLT [{clt.lower:.4f}, {clt.upper:.4f}]")

a = ci_unknown_scale(path, "d4", 3, 0.05)
b = ci_unknown_scale(path.scaled(1e-3), "d4", 3, 0.05)
print("after rescaling by 1e-3, endpoints move by", np.abs(np.subtract((a.lower, a.upper), (b.lower, b.upper))).max())
