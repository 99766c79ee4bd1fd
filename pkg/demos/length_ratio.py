"""Ratio of asymptotic lengths, concentration vs CLT, as a function of H (CSV on stdout)."""
import numpy as np

from hurst_ci.intervals import length_ratio_profile

grid = np.round(np.linspace(0.05, 0.95, 19), 3)
cols = {
    "known_i2": length_ratio_profile("i2", None, 0.05, grid)[:, 1],
    "known_d4": length_ratio_profile("d4", None, 0.05, grid)[:, 1],
    "unknown_i2_M2": length_ratio_profile("i2", 2, 0.05, grid)[:, 1],
    "unknown_d4_M5": length_ratio_profile("d4", 5, 0.05, grid)[:, 1],
}
print("H," + ",".join(cols))
for i, h in enumerate(grid):
    print(f"{h}," + ",".join(f"{v[i]:.4f}" for v in cols.values()))
