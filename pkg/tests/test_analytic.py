import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from d2d_access import analytic as an
from d2d_access.model import NetworkConfig, c_alpha, derive_constants, k_alpha

BETA_5DB = an.db_to_linear(5.0)


def g_from_ps_rootfind(ps, cfg, lam):
    """Invert the access probability numerically, independent of Lambert W."""
    a = cfg.pathloss_exponent
    c, k = c_alpha(cfg), k_alpha(cfg)

    def f(s):  # s = G^(2/alpha)
        return math.exp(-lam * c * s) - ps * (1 + k * s)

    s = optimize.brentq(f, 0.0, 1e6, xtol=1e-15, rtol=1e-15)
    return s ** (a / 2)


def conditional_ps_oracle(beta, cfg, lam):
    """Bisection on ps (1 + K b) = exp(-lambda C ps b)."""
    b = beta ** (2 / cfg.pathloss_exponent)
    c, k = c_alpha(cfg), k_alpha(cfg)
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * (1 + k * b) - math.exp(-lam * c * mid * b) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_disk_pdf_normalized():
    val, _ = integrate.quad(an.disk_distance_pdf, 0, 1000, args=(500.0,), epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)
    mean, _ = integrate.quad(lambda r: r * an.disk_distance_pdf(r, 500.0), 0, 1000, epsabs=1e-10)
    assert mean == pytest.approx(128 * 500 / (45 * math.pi), rel=1e-9)


def test_coverage_small_beta_limits(cfg):
    assert an.coverage_prob_exact(1e-12, cfg, 1e-4) == pytest.approx(1.0, abs=1e-5)
    assert an.coverage_prob_approx(1e-12, cfg, 1e-4) == pytest.approx(1.0, abs=1e-5)


def test_exact_zero_density_is_cellular_factor(cfg):
    assert an.coverage_prob_exact(1.0, cfg, 0.0) == an.cellular_coverage_factor(1.0, cfg)


def test_approx_zero_density(cfg):
    k = k_alpha(cfg)
    assert an.coverage_prob_approx(4.0, cfg, 0.0) == pytest.approx(1 / (1 + k * 2.0), rel=1e-15)


def test_approx_reference_value(cfg):
    assert an.coverage_prob_approx(3.1623, cfg, 1e-4) == pytest.approx(0.0916, abs=5e-5)
    exact = an.coverage_prob_exact(BETA_5DB, cfg, 1e-4)
    assert an.coverage_prob_approx(BETA_5DB, cfg, 1e-4) == pytest.approx(exact, rel=0.02)


@pytest.mark.parametrize("lam", [2e-5, 6e-5, 1e-4])
def test_exact_vs_approx_where_close(cfg, lam):
    for db in np.arange(-10, 8.01, 1.0):
        b = an.db_to_linear(db)
        assert an.coverage_prob_approx(b, cfg, lam) == pytest.approx(an.coverage_prob_exact(b, cfg, lam), rel=0.02)


@pytest.mark.xfail(strict=True, reason="mean-distance approximation drifts past 2% above ~8 dB (11% at 20 dB)")
def test_exact_vs_approx_full_range(cfg):
    for db in np.arange(-10, 20.01, 1.0):
        b = an.db_to_linear(db)
        assert an.coverage_prob_approx(b, cfg, 1e-4) == pytest.approx(an.coverage_prob_exact(b, cfg, 1e-4), rel=0.02)


def test_access_probability_basics(cfg):
    assert an.access_probability(0.0, cfg, 1e-4) == 1.0
    grid = np.linspace(0, 50, 100)
    ps = [an.access_probability(g, cfg, 1e-4) for g in grid]
    assert all(a > b for a, b in zip(ps, ps[1:]))


def test_ase_unconditional_reductions(cfg):
    lam = 1e-4
    assert an.ase_unconditional(1e-12, BETA_5DB, cfg, lam) < 1e-15
    full = lam * an.coverage_prob_approx(BETA_5DB, cfg, lam) * math.log2(1 + BETA_5DB)
    assert an.ase_unconditional(1.0, BETA_5DB, cfg, lam) == pytest.approx(full, rel=1e-14)


def test_unconditional_reference(cfg):
    sol = an.optimal_unconditional(BETA_5DB, cfg, 1e-4)
    assert sol.active and sol.method == "unconditional"
    assert sol.ps_star == pytest.approx(0.4558, abs=1e-4)
    assert sol.g_star == pytest.approx(0.338, abs=5e-4)
    assert sol.g_star_db == pytest.approx(-4.7, abs=0.05)
    # independent routes: root-find the threshold equation and grid-maximize the ASE
    assert sol.g_star == pytest.approx(g_from_ps_rootfind(sol.ps_star, cfg, 1e-4), rel=1e-6)
    ps_grid = np.linspace(1e-4, 1, 10_000)
    ase = [an.ase_unconditional(p, BETA_5DB, cfg, 1e-4) for p in ps_grid]
    assert ps_grid[int(np.argmax(ase))] == pytest.approx(sol.ps_star, abs=1e-4)


def test_unconditional_inactive_branch(cfg):
    sol = an.optimal_unconditional(BETA_5DB, cfg, 1e-6)
    assert (sol.ps_star, sol.g_star, sol.active, sol.g_star_db) == (1.0, 0.0, False, None)


def test_conditional_reference(cfg):
    sol = an.optimal_conditional(BETA_5DB, cfg, 1e-4)
    ps_oracle = conditional_ps_oracle(BETA_5DB, cfg, 1e-4)
    assert ps_oracle == pytest.approx(0.3672, abs=1e-4)
    assert sol.ps_star == pytest.approx(ps_oracle, abs=1e-6)
    g_oracle = g_from_ps_rootfind(ps_oracle, cfg, 1e-4)
    assert g_oracle == pytest.approx(0.550, abs=5e-4)
    assert sol.g_star == pytest.approx(g_oracle, rel=1e-6)
    assert sol.g_star_db == pytest.approx(-2.6, abs=0.05)
    assert an.access_probability(sol.g_star, cfg, 1e-4) == pytest.approx(sol.ps_star, abs=1e-8)


def test_conditional_maximizes_regime_envelope(cfg):
    ps_grid = np.linspace(1e-5, 1, 100_000)
    env = [min(an.ase_conditional_regimes(p, BETA_5DB, cfg, 1e-4)) for p in ps_grid]
    best = ps_grid[int(np.argmax(env))]
    assert best == pytest.approx(an.optimal_conditional(BETA_5DB, cfg, 1e-4).ps_star, abs=2e-5)


def test_conditional_active_below_unconditional_boundary():
    cfg = NetworkConfig(d2d_density_per_m2=6e-5)
    beta = an.db_to_linear(-2.0)
    assert not an.optimal_unconditional(beta, cfg, 6e-5).active
    cond = an.optimal_conditional(beta, cfg, 6e-5)
    assert cond.active and cond.g_star > 0


scenario = st.tuples(st.floats(1e-5, 1e-4), st.floats(-5.0, 15.0))


@settings(max_examples=50, deadline=None)
@given(scenario)
def test_unconditional_is_grid_optimal(sc):
    lam, db = sc
    cfg = NetworkConfig()
    beta = an.db_to_linear(db)
    sol = an.optimal_unconditional(beta, cfg, lam)
    ps = np.linspace(1e-5, 1.0, 100_000)
    b = beta ** 0.5
    ase = lam * ps * np.exp(-lam * ps * c_alpha(cfg) * b) / (1 + k_alpha(cfg) * b) * math.log2(1 + beta)
    best = ase.max()
    ase_star = an.ase_unconditional(sol.ps_star, beta, cfg, lam)
    slope = np.abs(np.diff(ase)).max()
    assert best <= ase_star + slope


@settings(max_examples=50, deadline=None)
@given(scenario)
def test_fixed_point_and_duality(sc):
    lam, db = sc
    cfg = NetworkConfig()
    beta = an.db_to_linear(db)
    b = beta ** 0.5
    cond = an.optimal_conditional(beta, cfg, lam)
    if cond.ps_star < 1:
        resid = cond.ps_star * (1 + k_alpha(cfg) * b) - math.exp(-lam * c_alpha(cfg) * cond.ps_star * b)
        assert abs(resid) <= 1e-9
    for sol in (cond, an.optimal_unconditional(beta, cfg, lam)):
        if sol.active:
            assert abs(an.access_probability(sol.g_star, cfg, lam) - sol.ps_star) <= 1e-8
        assert 0 < sol.ps_star <= 1 and sol.g_star >= 0
        assert (sol.g_star == 0) == (not sol.active)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-5, 1e-4))
def test_activation_boundary_consistency(lam):
    cfg = NetworkConfig(d2d_density_per_m2=lam)
    edge = derive_constants(cfg).beta_activation
    assert an.optimal_unconditional(edge * (1 + 1e-12), cfg, lam).active
    assert not an.optimal_unconditional(edge * (1 - 1e-12), cfg, lam).active


def test_unconditional_small_beta_limit():
    cfg = NetworkConfig()
    beta = 1e-6
    lam = 2.0 / (c_alpha(cfg) * beta**0.5)  # twice the activation density
    sol = an.optimal_unconditional(beta, cfg, lam)
    assert sol.active
    assert sol.g_star < 1e-6


def test_unconditional_log_scaling(cfg):
    lam = 1e-4
    ratios = [an.optimal_unconditional(b, cfg, lam).g_star ** 0.5 / math.log(b) for b in (1e3, 1e4, 1e5, 1e6)]
    # G^(2/alpha) / ln(beta) tends to 2 / (alpha lambda C), up to a slowly vanishing ln ln term
    limit = 2 / (cfg.pathloss_exponent * lam * c_alpha(cfg))
    for r in ratios:
        assert r == pytest.approx(limit, rel=0.1)


def test_asymptotic_form_tracks_exact(cfg):
    # W(x) ~ ln x drops a ln ln x term so only the growth order matches
    for b in (1e4, 1e6, 1e8):
        exact = an.optimal_unconditional(b, cfg, 1e-4).g_star
        approx = an.g_unconditional_asymptotic(b, cfg, 1e-4)
        assert approx > exact
    r1 = an.g_unconditional_asymptotic(1e20, cfg, 1e-4) / an.optimal_unconditional(1e20, cfg, 1e-4).g_star
    r2 = an.g_unconditional_asymptotic(1e40, cfg, 1e-4) / an.optimal_unconditional(1e40, cfg, 1e-4).g_star
    assert 1 < r2 < r1


def test_huge_exponent_does_not_overflow():
    cfg = NetworkConfig()
    lam = 1e-2  # lambda C / K is about 1000, so exp(lambda C / K) overflows
    assert c_alpha(cfg) * lam / k_alpha(cfg) > 800
    for solve in (an.optimal_unconditional, an.optimal_conditional):
        sol = solve(10.0, cfg, lam)
        assert math.isfinite(sol.g_star) and sol.active
        assert an.access_probability(sol.g_star, cfg, lam) == pytest.approx(sol.ps_star, abs=1e-8)


def test_sum_rate_zero_density_integral_finite(cfg):
    val = an.sum_rate_integral(cfg, 0.0)
    assert math.isfinite(val) and val > 0
    assert an.sum_rate_analytic(cfg, 0.0) == 0.0


def test_sum_rate_integral_vs_direct_quadrature(cfg):
    direct, _ = integrate.quad(lambda x: an.coverage_prob_approx(x, cfg, 2e-5) / (1 + x), 0, np.inf, limit=500)
    assert an.sum_rate_integral(cfg, 2e-5) == pytest.approx(direct, abs=1e-6)


def test_sum_rate_integral_decreasing_in_density(cfg):
    vals = [an.sum_rate_integral(cfg, lam) for lam in (1e-5, 2e-5, 4e-5, 6e-5, 1e-4)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_db_roundtrip():
    assert an.db_to_linear(10.0) == pytest.approx(10.0)
    assert an.linear_to_db(an.db_to_linear(-3.3)) == pytest.approx(-3.3, abs=1e-12)
