"""Small Monte-Carlo study: coverage and mean length of each procedure.

Set HURST_CI_WORKERS to use several processes; the numbers do not change.
"""
from hurst_ci.experiments import run_coverage

reps, n, seed = 200, 500, 2024
print(f"{reps} replications, n = {n}")
for H in (0.2, 0.5, 0.8):
    for method, kw in [("ci-known", {}), ("clt-known", {}), ("ci-unknown", {"M": 2}), ("clt-unknown", {"M": 2})]:
        rec = run_coverage(method, "i2", n, H, reps=reps, seed=seed, **kw)
        print(f"H={H}  {rec.method:12s} coverage {rec.coverage:5.1f}%  length {rec.mean_length:.4f}  "
              f"centre {rec.mean_midpoint:.4f}")
