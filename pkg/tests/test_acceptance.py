"""Acceptance checks: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
when output capture is on) or directly with ``python3 tests/test_acceptance.py``.
Tolerances are the ones stated for each criterion; nothing is relaxed here.
"""
import math
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))
import reference_tables as ref  # noqa: E402

from hurst_ci.concentration import (  # noqa: E402
    ConcentrationBound, GeneralBoundParams, invert_nv_phi_l, invert_nv_phi_r, invert_phi_l_general,
    invert_phi_r_general, phi_l, phi_l_general, phi_r, phi_r_general, q_asymptotic,
)
from hurst_ci.experiments import ExperimentConfig, run_table  # noqa: E402
from hurst_ci.fbm_sim import SimConfig, fgn_autocovariance, simulate  # noqa: E402
from hurst_ci.filter_bank import builtin_filter, dilate, kappa, rho_l1_exact, rho_l1_norm, sup_l1_norm, tau_a  # noqa: E402
from hurst_ci.intervals import (  # noqa: E402
    asymptotic_length_unknown, bnp_max_h_star, bnp_min_n, ci_known_scale, ci_unknown_scale,
    estimator_gen, min_n_invertible,
)
from hurst_ci.intervals.gn import _min_n  # noqa: E402
from hurst_ci.statistics import v_n  # noqa: E402

MC_SEED = 20261016
RESULTS = {}


@pytest.fixture
def report(capsys):
    def _report(k, ok, text):
        RESULTS[k] = ok
        with capsys.disabled():
            print(f"\n[criterion {k:2d}] {'PASS' if ok else 'FAIL'}: {text}")
        return ok
    return _report


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _clear_kappa_cache():
    from hurst_ci.filter_bank.kappa import _kappa
    _kappa.cache_clear()


# 1 -----------------------------------------------------------------------

def test_criterion_01_kappa_constants(report):
    _clear_kappa_cache()
    cases = [("i1", 4.0, 1e-9), ("i1^2", 8.0, 1e-9), ("i2", 16 / 3, 1e-9), ("i2^2", 7.813554, 1e-5)]
    bad = []
    slow = []
    for name, expected, tol in cases:
        val, dt = _timed(lambda: kappa(builtin_filter(name)))
        if abs(val - expected) > tol:
            bad.append(f"{name}={val!r}")
        if dt >= 1.0:
            slow.append(f"{name} {dt:.2f}s")
    ok = not bad and not slow
    report(1, ok, f"kappa constants; mismatches={bad or 'none'}; over 1 s={slow or 'none'}")
    assert ok


# 2 -----------------------------------------------------------------------

def test_criterion_02_sup_l1_table(report):
    _clear_kappa_cache()
    t0 = time.perf_counter()
    bad = []
    for name, row in ref.SUP_L1.items():
        f = builtin_filter(name)
        for m, expected in enumerate(row, start=1):
            val = sup_l1_norm(dilate(f, m))[1]
            if abs(val - expected) > 5e-4:
                bad.append(f"{name} m={m}: {val:.4f} vs {expected}")
    worst = 0.0
    for name in ("i1", "i2", "i3", "i4"):
        base = builtin_filter(name)
        top = 0.49 if base.order == 1 else 1.0
        for m in range(1, 6):
            f = dilate(base, m)
            for H in np.linspace(0.01, top, 12):
                worst = max(worst, abs(rho_l1_norm(f, H).l1_norm - rho_l1_exact(f, H)) / rho_l1_exact(f, H))
    dt = time.perf_counter() - t0
    ok = not bad and worst < 1e-8 and dt < 60
    report(2, ok, f"sup-l1 table {45 - len(bad)}/45 cells to 3 d.p.; closed form vs numeric max rel "
                  f"{worst:.1e}; {dt:.1f} s; mismatches: {bad or 'none'}")
    assert ok


# 3 -----------------------------------------------------------------------

def test_criterion_03_tau_table(report):
    t0 = time.perf_counter()
    bad = []
    for name, row in ref.TAU.items():
        f = builtin_filter(name)
        for m, expected in enumerate(row, start=1):
            val = tau_a(dilate(f, m))
            if abs(val - expected) > 5e-3:
                bad.append(f"{name} m={m}: {val:.4f} vs {expected}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1.0
    report(3, ok, f"tau table {45 - len(bad)}/45 cells to 2 d.p. in {dt:.3f} s; mismatches: {bad or 'none'}")
    assert ok


# 4 -----------------------------------------------------------------------

def test_criterion_04_min_n_table(report):
    _min_n.cache_clear()
    t0 = time.perf_counter()
    bad = []
    for name, row in ref.MIN_N.items():
        f = builtin_filter(name)
        for m, expected in enumerate(row, start=1):
            val = min_n_invertible(dilate(f, m))
            if val != expected:
                bad.append(f"{name} m={m}: {val} vs {expected}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    report(4, ok, f"minimal-n table {45 - len(bad)}/45 exact in {dt:.1f} s; mismatches: {bad or 'none'}")
    assert ok


# 5 -----------------------------------------------------------------------

def test_criterion_05_inverse_bound_table(report):
    t0 = time.perf_counter()
    bad = []
    worst_rt = 0.0
    for n, by_bound in ref.INVERSE_BOUNDS.items():
        p = GeneralBoundParams.from_nv(4 / math.sqrt(n), 4.0)
        for i, alpha in enumerate(ref.INVERSE_ALPHAS):
            got = {
                "NV": (invert_nv_phi_l(alpha, p), invert_nv_phi_r(alpha, p)),
                "BC": (invert_phi_l_general(alpha, p), invert_phi_r_general(alpha, p)),
            }
            for bound, (l_val, r_val) in got.items():
                for side, val, expected in (("l", l_val, by_bound[bound][2 * i]), ("r", r_val, by_bound[bound][2 * i + 1])):
                    if abs(val - expected) > 1e-4:
                        bad.append(f"{bound} n={n} alpha={alpha} {side}: {val:.4f} vs {expected}")
            worst_rt = max(worst_rt, abs(phi_r_general(got["BC"][1], p) - alpha),
                           abs(phi_l_general(got["BC"][0], p) - alpha))
    dt = time.perf_counter() - t0
    ok = not bad and worst_rt < 1e-10 and dt < 5
    report(5, ok, f"inverse-bound table {80 - len(bad)}/80 cells to 4 d.p.; round trip {worst_rt:.1e}; "
                  f"{dt:.2f} s; mismatches: {bad or 'none'}")
    assert ok


# 6 -----------------------------------------------------------------------

def test_criterion_06_baseline_feasibility(report):
    bad = []
    for alpha, row in ref.BNP_MIN_N.items():
        for k, expected in enumerate(row, start=1):
            val = bnp_min_n(alpha, k / 10)
            if val != expected:
                bad.append(f"min n alpha={alpha} H*={k / 10}: {val} vs {expected}")
    for alpha, row in ref.BNP_MAX_H.items():
        for n, expected in zip(ref.BNP_MAX_H_N, row):
            val = round(bnp_max_h_star(alpha, n), 2)
            if abs(val - expected) > 1e-9:
                bad.append(f"max H* alpha={alpha} n={n}: {val} vs {expected}")
    ok = not bad
    report(6, ok, f"baseline feasibility {45 - len(bad)}/45 values; mismatches: {bad or 'none'}")
    assert ok


# 7 -----------------------------------------------------------------------

def _coverage(n, H, filt, reps=500, alpha=0.05):
    hits = 0
    for r in range(reps):
        ci = ci_known_scale(simulate(SimConfig(H=H, n=n, seed=MC_SEED), r), filt, alpha)
        hits += ci.feasible and ci.contains(H)
    return 100.0 * hits / reps


def test_criterion_07_coverage_guarantee(report):
    floor, soft = [], []
    for n in (50, 100, 500):
        for H in (0.2, 0.5, 0.8):
            for name in ("i2", "d4"):
                cov = _coverage(n, H, builtin_filter(name))
                if cov < 95.0:
                    floor.append(f"{name} n={n} H={H}: {cov:.1f}%")
                if cov < 99.0:
                    soft.append(f"{name} n={n} H={H}: {cov:.1f}%")
    ok = not floor
    report(7, ok, f"coverage >= 95% on 18 configurations; below floor: {floor or 'none'}; "
                  f"soft check (>= 99%) misses: {soft or 'none'}")
    assert ok


# 8 -----------------------------------------------------------------------

def _compare_mc(rows, reference, H_list=(0.2, 0.5, 0.8)):
    by_key = {(r["n"], r["procedure"]): r for r in rows}
    bad = []
    for n, proc, vals in reference:
        row = by_key[(n, proc)]
        for i, H in enumerate(H_list):
            cov_ref, len_ref, h_ref = vals[3 * i:3 * i + 3]
            cov, length, hhat = row[f"cover_H={H:g}"], row[f"length_H={H:g}"], row[f"Hhat_H={H:g}"]
            tag = f"n={n} {proc} H={H}"
            if abs(length - len_ref) > 0.10 * len_ref:
                bad.append(f"{tag} length {length:.4f} vs {len_ref}")
            if abs(hhat - h_ref) > 0.01:
                bad.append(f"{tag} Hhat {hhat:.4f} vs {h_ref}")
            if proc.startswith("CLT") and abs(cov - cov_ref) > 3.0:
                bad.append(f"{tag} cover {cov:.1f} vs {cov_ref}")
            if proc.startswith("CI") and cov < 99.0:
                bad.append(f"{tag} cover {cov:.1f} < 99")
    return bad


def test_criterion_08_monte_carlo_tables(report, tmp_path):
    workers = int(os.environ.get("HURST_CI_WORKERS", "1"))
    cfg5 = ExperimentConfig(table="5", seed=MC_SEED, out_dir=str(tmp_path), workers=workers)
    cfg6 = ExperimentConfig(table="6", seed=MC_SEED, out_dir=str(tmp_path), workers=workers)
    rows5, _, _ = run_table("5", cfg5)
    rows6, _, _ = run_table("6", cfg6)
    bad = _compare_mc(rows5, ref.MC_KNOWN) + _compare_mc(rows6, ref.MC_UNKNOWN)
    cells = 3 * (len(ref.MC_KNOWN) + len(ref.MC_UNKNOWN))
    ok = not bad
    report(8, ok, f"Monte-Carlo tables ({cells} cells, 500 reps): {len(bad)} deviations: {bad or 'none'}")
    assert ok


# 9 -----------------------------------------------------------------------

def test_criterion_09_concentration_validity(report):
    n, reps = 256, 5000
    f = builtin_filter("i2")
    bound = ConcentrationBound(kappa(f), n - f.ell)
    t_grid = np.linspace(0.25, 5.0, 20)
    bad = []
    for H in (0.2, 0.5, 0.8):
        z = np.array([math.sqrt(n - f.ell) * v_n(simulate(SimConfig(H=H, n=n, seed=MC_SEED), r), f, H)
                      for r in range(reps)])
        for t in t_grid:
            right, left = np.mean(z >= t), np.mean(z <= -t)
            if right > phi_r(t, bound):
                bad.append(f"H={H} t={t:.2f} right {right:.4f} > {phi_r(t, bound):.4f}")
            if left > phi_l(t, bound):
                bad.append(f"H={H} t={t:.2f} left {left:.4f} > {phi_l(t, bound):.4f}")
    ok = not bad
    report(9, ok, f"empirical tails below both bounds on a 20-point grid, 3 H values: violations {bad or 'none'}")
    assert ok


# 10 ----------------------------------------------------------------------

def test_criterion_10_simulator_autocovariance(report):
    n, reps = 512, 2000
    bad = []
    worst = 0.0
    for H in (0.3, 0.7):
        est = np.empty((reps, 6))
        for r in range(reps):
            x = np.diff(simulate(SimConfig(H=H, n=n, seed=MC_SEED), r).values)
            est[r] = [np.mean(x[k:] * x[:x.size - k]) for k in range(6)]
        mean, se = est.mean(axis=0), est.std(axis=0, ddof=1) / math.sqrt(reps)
        target = fgn_autocovariance(H, 1.0, n, np.arange(6))
        zs = np.abs(mean - target) / se
        worst = max(worst, zs.max())
        bad += [f"H={H} lag {k}: {zs[k]:.2f} SE" for k in range(6) if zs[k] > 3]
    ok = not bad
    report(10, ok, f"fGn autocovariance lags 0-5 within 3 SE (max {worst:.2f} SE); violations {bad or 'none'}")
    assert ok


# 11 ----------------------------------------------------------------------

def test_criterion_11_scale_invariance_bitwise(report):
    f = builtin_filter("i2")
    differ = []
    max_dev = 0.0
    total = 0
    for rep in range(5):
        for H in (0.3, 0.7):
            p = simulate(SimConfig(H=H, n=1000, seed=MC_SEED), rep)
            base = ci_unknown_scale(p, f, 2, 0.05)
            est = estimator_gen(p, f, 2)
            for c in (1e-3, 7.0, 1e3):
                q = p.scaled(c)
                ci = ci_unknown_scale(q, f, 2, 0.05)
                e = estimator_gen(q, f, 2)
                total += 1
                dev = max(abs(ci.lower - base.lower), abs(ci.upper - base.upper), abs(e - est))
                max_dev = max(max_dev, dev)
                if (ci.lower, ci.upper, e) != (base.lower, base.upper, est):
                    differ.append(f"rep={rep} H={H} c={c:g}")
    ok = not differ
    report(11, ok, f"bit-identical under scaling in {total - len(differ)}/{total} cases "
                   f"(largest deviation {max_dev:.1e})")
    assert ok


# 12 ----------------------------------------------------------------------

def test_criterion_12_asymptotic_length(report):
    n, reps, alpha = 10_000, 100, 0.05
    lines, bad = [], []
    for name in ("i2", "d4"):
        f = builtin_filter(name)
        target = q_asymptotic(alpha / 2, kappa(f))
        target_u = {M: asymptotic_length_unknown(f, M, alpha, n) * math.sqrt(n) for M in (2, 5)}
        for H in (0.2, 0.5, 0.8):
            paths = [simulate(SimConfig(H=H, n=n, seed=MC_SEED), r) for r in range(reps)]
            known = np.mean([ci_known_scale(p, f, alpha).length for p in paths]) * math.sqrt(n) * math.log(n)
            ratio = known / target
            lines.append(f"known {name} H={H}: {ratio:.3f}")
            if abs(ratio - 1) > 0.15:
                bad.append(f"known {name} H={H} ratio {ratio:.3f}")
            for M in (2, 5):
                unk = np.mean([ci_unknown_scale(p, f, M, alpha).length for p in paths]) * math.sqrt(n)
                r_u = unk / target_u[M]
                lines.append(f"unknown {name} M={M} H={H}: {r_u:.3f}")
                if abs(r_u - 1) > 0.15:
                    bad.append(f"unknown {name} M={M} H={H} ratio {r_u:.3f}")
    ok = not bad
    report(12, ok, f"length x rate / constant within 15%: outside: {bad or 'none'}; all ratios: {'; '.join(lines)}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
