"""The filter constants behind the bounds: kappa, tau and the sample-size thresholds."""
from hurst_ci.filter_bank import builtin_filter, dilate, kappa, sup_l1_norm, tau_a
from hurst_ci.intervals import min_n_invertible
from hurst_ci.intervals.bnp import bnp_min_n

print(f"{'filter':8s} {'p':>2s} {'argmax H':>9s} {'kappa':>8s} {'tau':>8s} {'min n':>6s}")
for name in ("i1", "i2", "i2^2", "d4", "c6", "d6", "d8", "c12"):
    f = builtin_filter(name)
    h, s = sup_l1_norm(f)
    tau = tau_a(f) if f.order > 1 else float("nan")
    n_min = max(f.ell + 1, min_n_invertible(f)) if f.order > 1 else f.ell + 1
    print(f"{name:8s} {f.order:2d} {h:9.3f} {kappa(f):8.4f} {tau:8.3f} {n_min:6d}")

print("\nbaseline interval, alpha = 5%: smallest usable n for H* = 0.5, 0.8, 0.9:",
      [bnp_min_n(0.05, h) for h in (0.5, 0.8, 0.9)])
print("kappa of i2 dilated m = 1..5:", [round(kappa(dilate(builtin_filter('i2'), m)), 4) for m in range(1, 6)])
