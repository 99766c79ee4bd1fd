import math

import numpy as np
import pytest

from hurst_ci.concentration import quantiles
from hurst_ci.filter_bank import builtin_filter, dilate, kappa, pi
from hurst_ci.fbm_sim import SimConfig, simulate
from hurst_ci.intervals import (
    ConfidenceInterval, DesignError, DilationDesign, EstimatorDomainError, bnp_g, bnp_g_inverse,
    bnp_max_h_star, bnp_min_n, ci_bnp, ci_clt_known, ci_clt_unknown, ci_known_scale,
    ci_unknown_scale, estimator_gen, estimator_std, exact_length_unknown, gn, gn_inverse,
    length_ratio_profile, min_n_invertible, normal_quantile, sigma2_gen, sigma2_std,
)
from hurst_ci.statistics import quadratic_variation

I2, D4 = builtin_filter("i2"), builtin_filter("d4")


def path(H=0.6, n=500, seed=1, rep=0, C=1.0):
    return simulate(SimConfig(H=H, C=C, n=n, seed=seed), rep)


# --------------------------------------------------------------------- g_n

def test_gn_increments_closed_form():
    for x in (0.1, 0.5, 0.9):
        assert gn(x, I2, 300) == pytest.approx(2 * x * math.log(300) - math.log(4 - 4**x), rel=1e-13)
    assert gn(0.5, I2, 100) == pytest.approx(math.log(100) - math.log(2))


@pytest.mark.parametrize("filt", [I2, D4, builtin_filter("c12"), dilate(I2, 3)])
def test_gn_round_trip(filt):
    for x in np.arange(0.1, 1.0, 0.1):
        assert gn_inverse(gn(x, filt, 200), filt, 200) == pytest.approx(x, abs=1e-10)


def test_gn_inverse_clamps():
    y0 = gn(0.0, I2, 100)
    assert gn_inverse(y0 - 1.0, I2, 100) == 0.0
    assert gn_inverse(y0 + 1e-9, I2, 100) < 1e-6
    assert gn_inverse(1e6, I2, 100) == 1.0
    assert gn_inverse(gn(0.5, I2, 100), I2, 100) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("name", ["i2", "d4", "c6", "i3", "d6", "i4", "d8", "s8", "c12"])
@pytest.mark.parametrize("m", [1, 3])
def test_gn_increasing_from_min_n(name, m):
    f = dilate(builtin_filter(name), m)
    n = min_n_invertible(f)
    assert n >= 1
    xs = np.linspace(0.001, 0.995, 300)
    vals = [gn(x, f, n) for x in xs]
    assert np.all(np.diff(vals) > 0)


def test_bnp_g_matches_rescaled_gn():
    # the baseline convention is g_n / (2 log n) for the second-order increments
    for x in (0.2, 0.7):
        assert bnp_g(x, 400) == pytest.approx(gn(x, I2, 400) / (2 * math.log(400)))
        assert bnp_g_inverse(bnp_g(x, 400), 400) == pytest.approx(x, abs=1e-10)


# --------------------------------------------------------------- BNP tables

@pytest.mark.parametrize("alpha,row", [
    (0.01, [271, 298, 335, 388, 471, 611, 886, 1592, 4936]),
    (0.05, [189, 208, 233, 270, 328, 425, 617, 1108, 3437]),
    (0.10, [154, 169, 190, 220, 266, 346, 501, 900, 2791]),
])
def test_bnp_min_n_table(alpha, row):
    # reference values: minimal sample sizes of the baseline interval
    assert [bnp_min_n(alpha, h / 10) for h in range(1, 10)] == row


@pytest.mark.parametrize("alpha,n,expected", [
    (0.10, 500, 0.70), (0.05, 200, 0.17), (0.01, 100, 0.00), (0.01, 10000, 0.93), (0.10, 50, 0.00),
])
def test_bnp_max_h_star(alpha, n, expected):
    # reference values: largest admissible H*
    assert round(bnp_max_h_star(alpha, n), 2) == pytest.approx(expected)


def test_bnp_infeasible_and_feasible():
    small = simulate(SimConfig(H=0.5, n=102, seed=1))
    ci = ci_bnp(small, 0.01, 0.5)
    assert not ci.feasible
    big = simulate(SimConfig(H=0.5, n=1200, seed=1))
    ci = ci_bnp(big, 0.05, 0.8)
    assert ci.feasible and ci.lower <= ci.estimator <= ci.upper


# ---------------------------------------------------------- known scale

def test_known_scale_brackets_estimator():
    for rep in range(10):
        p = path(H=0.3, n=200, rep=rep)
        ci = ci_known_scale(p, D4, 0.05)
        assert ci.lower <= estimator_std(p, D4) <= ci.upper
        assert ci.estimator == estimator_std(p, D4)


def test_known_scale_nested_in_alpha():
    p = path(H=0.7, n=300)
    wide, narrow = ci_known_scale(p, I2, 0.01), ci_known_scale(p, I2, 0.2)
    assert wide.lower <= narrow.lower <= narrow.upper <= wide.upper


def test_known_scale_infeasible_below_threshold():
    ci = ci_known_scale(np.array([0.0, 0.1]), I2, 0.05)
    assert not ci.feasible
    assert ci_known_scale(np.array([0.0, 0.1, -0.05]), I2, 0.05).feasible


def test_known_scale_uses_half_alpha_quantiles():
    p = path(H=0.5, n=400)
    ci = ci_known_scale(p, I2, 0.05)
    q_l, q_r = quantiles(0.025, kappa(I2), 400 - 2)
    assert ci.diagnostics["q_l"] == q_l and ci.diagnostics["q_r"] == q_r
    log_s = math.log(quadratic_variation(p, I2).s_n)
    assert ci.lower == pytest.approx(gn_inverse(math.log(1 - q_l / math.sqrt(398)) - log_s, I2, 400))


def test_known_scale_with_scale_argument():
    p = path(H=0.45, n=300, C=2.5)
    a = ci_known_scale(p, I2, 0.05, C=2.5)
    b = ci_known_scale(p.values / 2.5, I2, 0.05)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_estimator_std_exact_on_model_value():
    # a path whose quadratic variation equals pi_H(0) n^{-2H} returns H
    H, n = 0.35, 400
    x = path(H=0.5, n=n).values
    s = quadratic_variation(x, I2).s_n
    x = x * math.sqrt(pi(I2, H, 0) * n ** (-2 * H) / s)
    assert estimator_std(x, I2) == pytest.approx(H, abs=1e-10)


# -------------------------------------------------------- unknown scale

def test_design_validation():
    assert np.allclose(DilationDesign.regression(3).d, np.log([1, 2, 3]) - np.log([1, 2, 3]).mean())
    for d in ([1.0, 1.0], [-1.0, 0.0, 1.0], [1.0, -1.0]):
        with pytest.raises(DesignError):
            DilationDesign(len(d), d)
    with pytest.raises(DesignError):
        DilationDesign(1)
    des = DilationDesign(3, [-2.0, 1.0, 1.0])
    assert des.I_minus == (1,) and des.I_plus == (2, 3)


def test_estimator_gen_m2_closed_form():
    p = path(H=0.6, n=500)
    s1 = quadratic_variation(p, I2).s_n
    s2 = quadratic_variation(p, dilate(I2, 2)).s_n
    assert estimator_gen(p, I2, 2) == pytest.approx(math.log(s2 / s1) / (2 * math.log(2)), abs=1e-12)


def test_unknown_scale_m2_explicit_form():
    p, n, ell = path(H=0.4, n=600), 600, 2
    ci = ci_unknown_scale(p, I2, 2, 0.05)
    q1 = quantiles(0.0125, kappa(I2), n - ell)
    q2 = quantiles(0.0125, kappa(dilate(I2, 2)), n - 2 * ell)
    xl1, xr1 = 1 - q1[0] / math.sqrt(n - ell), 1 + q1[1] / math.sqrt(n - ell)
    xl2, xr2 = 1 - q2[0] / math.sqrt(n - 2 * ell), 1 + q2[1] / math.sqrt(n - 2 * ell)
    r = math.log(quadratic_variation(p, dilate(I2, 2)).s_n / quadratic_variation(p, I2).s_n)
    lo = max(0.0, (r - math.log(xr2 / xl1)) / (2 * math.log(2)))
    hi = min(1.0, (r - math.log(xl2 / xr1)) / (2 * math.log(2)))
    assert ci.lower == pytest.approx(lo, abs=1e-12)
    assert ci.upper == pytest.approx(hi, abs=1e-12)


def test_unknown_scale_brackets_estimator_and_nesting():
    for rep in range(5):
        p = path(H=0.5, n=3000, rep=rep)
        ci = ci_unknown_scale(p, D4, 3, 0.05)
        assert ci.lower <= estimator_gen(p, D4, 3) <= ci.upper
        narrow = ci_unknown_scale(p, D4, 3, 0.3)
        assert ci.lower <= narrow.lower and narrow.upper <= ci.upper


def test_unknown_scale_invariance():
    p = path(H=0.7, n=2000)
    base = ci_unknown_scale(p, I2, 2, 0.05)
    for c in (1e-3, 7.0, 1e3):
        ci = ci_unknown_scale(p.scaled(c), I2, 2, 0.05)
        assert ci.lower == pytest.approx(base.lower, abs=1e-13)
        assert ci.upper == pytest.approx(base.upper, abs=1e-13)
        assert estimator_gen(p.scaled(c), I2, 2) == pytest.approx(estimator_gen(p, I2, 2), abs=1e-13)
    # the time step of the observation window plays no role
    relabelled = type(p)(p.values, p.n, 0.25, {})
    ci = ci_unknown_scale(relabelled, I2, 2, 0.05)
    assert (ci.lower, ci.upper) == (base.lower, base.upper)


def test_unknown_scale_records_quantiles():
    ci = ci_unknown_scale(path(n=400), I2, DilationDesign.regression(4), 0.1)
    qs = ci.diagnostics["quantiles"]
    assert [q["m"] for q in qs] == [1, 2, 3, 4]
    assert [q["n_eff"] for q in qs] == [398, 396, 394, 392]


def test_unknown_scale_infeasible():
    assert not ci_unknown_scale(np.zeros(4), I2, 2, 0.05).feasible


def test_unknown_lengths_reference():
    # reference values: data-independent lengths of the scale-free interval at n = 10000 (2% slack for kappa rounding)
    for f, M, ref in ((I2, 2, 0.2179), (I2, 5, 0.1594), (D4, 2, 0.2165), (D4, 5, 0.1633)):
        assert exact_length_unknown(f, M, 0.05, 10000) == pytest.approx(ref, rel=0.02)


# ------------------------------------------------------------------ CLT

def test_normal_quantile_against_erf():
    def cdf(z):
        return 0.5 * (1 + math.erf(z / math.sqrt(2)))
    z = normal_quantile(0.975)
    assert z == pytest.approx(1.959964, abs=1e-6)
    assert cdf(z) == pytest.approx(0.975, abs=1e-14)


def test_sigma_values_reproduce_reference_lengths():
    # reference values: n = 10000 CLT lengths are 2 z sigma(H) / v_n up to sampling noise of the plug-in
    z, n = normal_quantile(0.975), 10000
    for f, H, ref in ((I2, 0.2, 0.0040), (I2, 0.8, 0.0034), (D4, 0.5, 0.0034)):
        assert 2 * z * math.sqrt(sigma2_std(f, H)) / (math.sqrt(n) * math.log(n)) == pytest.approx(ref, abs=6e-5)
    for f, H, M, ref in ((I2, 0.5, 2, 0.0529), (I2, 0.2, 5, 0.0305), (D4, 0.8, 2, 0.0407), (D4, 0.5, 5, 0.0355)):
        assert 2 * z * math.sqrt(sigma2_gen(f, H, M)) / math.sqrt(n) == pytest.approx(ref, abs=6e-4)


def test_sigma_gen_m2_form():
    from hurst_ci.filter_bank import cross_rho_l2_norm_sq, rho_l2_norm_sq
    H = 0.3
    g11 = rho_l2_norm_sq(I2, H)
    g22 = rho_l2_norm_sq(dilate(I2, 2), H)
    g12 = cross_rho_l2_norm_sq(I2, 1, 2, H)
    assert sigma2_gen(I2, H, 2) == pytest.approx((g11 + g22 - 2 * g12) / (2 * math.log(2) ** 2), rel=1e-10)


def test_clt_intervals():
    p = path(H=0.4, n=1000)
    a = ci_clt_known(p, I2, 0.05)
    b = ci_clt_unknown(p, I2, 2, 0.05)
    assert a.method == "CLT-known" and b.method == "CLT-unknown"
    assert a.midpoint == pytest.approx(a.estimator)
    assert b.estimator == estimator_gen(p, I2, 2)
    assert 0 <= a.lower < a.upper <= 1
    narrow = ci_clt_known(p, I2, 0.2)
    assert a.lower <= narrow.lower and narrow.upper <= a.upper


def test_clt_p1_outside_square_summable_region():
    p = simulate(SimConfig(H=0.9, n=2000, seed=1))
    with pytest.raises(EstimatorDomainError):
        ci_clt_known(p, builtin_filter("i1"), 0.05)


def test_length_ratio_profile():
    grid = np.linspace(0.05, 0.95, 10)
    known = length_ratio_profile(I2, None, 0.05, grid)
    assert known.shape == (10, 2)
    assert np.all(np.isfinite(known[:, 1])) and np.all(known[:, 1] > 1)
    unknown = length_ratio_profile(D4, 2, 0.05, grid)
    assert np.all(unknown[:, 1] > 0)
    fine = length_ratio_profile(I2, None, 0.05, [0.5, 0.5 + 1e-6])
    assert fine[1, 1] == pytest.approx(fine[0, 1], rel=1e-4)


def test_interval_container():
    with pytest.raises(ValueError):
        ConfidenceInterval(0.6, 0.4, 0.95, "CI-known")
    with pytest.raises(ValueError):
        ConfidenceInterval(0.1, 0.4, 0.95, "made-up")
    ci = ConfidenceInterval(0.2, 0.4, 0.95, "BNP", estimator=0.3)
    assert ci.contains(0.3) and not ci.contains(0.5)
    d = ci.to_dict()
    assert d["alpha"] == pytest.approx(0.05) and d["lower"] == 0.2
    off = ConfidenceInterval.infeasible("BNP", 0.05, "too small")
    assert not off.contains(0.5) and off.to_dict()["lower"] is None


def test_clt_unknown_estimate_outside_unit_interval():
    # short paths can push the regression estimate below 0; the interval stays valid
    for rep in range(60):
        p = simulate(SimConfig(H=0.2, n=50, seed=20261016), rep)
        ci = ci_clt_unknown(p, I2, 2, 0.05)
        assert 0.0 <= ci.lower <= ci.estimator <= ci.upper <= 1.0
