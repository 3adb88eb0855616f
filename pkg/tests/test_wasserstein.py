"""Exact one-dimensional Wasserstein distances to the standard normal.

Oracles, frozen first:
  * all-zeros sample: W_1 = E|N| = sqrt(2/pi), W_2 = 1,
    W_3 = (E|N|^3)^{1/3} = (2 sqrt(2/pi))^{1/3};
  * single point c: W_r^r = integral |c - t|^r phi(t) dt, evaluated here by
    adaptive quadrature (scipy) independent of the library's closed forms;
  * partial moments: scipy quadrature of t^k phi(t) on [a, b].
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from martclt.errors import DataError, DomainError
from martclt.wasserstein import (gaussian_partial_moments, gaussian_smooth,
                                 norm_cdf, norm_pdf, normal_quantile,
                                 normal_quantile_array, region_probability,
                                 w1_lower_bound_sin, wr_vs_normal,
                                 wr_vs_normal_batched)
from martclt.mds import in_scaled_region

W1_ZEROS = math.sqrt(2.0 / math.pi)
W2_ZEROS = 1.0
W3_ZEROS = (2.0 * math.sqrt(2.0 / math.pi)) ** (1.0 / 3.0)


def _quad_wrr_point_mass(c: float, r: float) -> float:
    val, _ = integrate.quad(lambda t: abs(c - t) ** r * stats.norm.pdf(t),
                            -12.0, 12.0, limit=300)
    return val


def test_zero_sample_closed_forms():
    z = np.zeros(257)
    assert wr_vs_normal(z, 1).value == pytest.approx(W1_ZEROS, abs=1e-10)
    assert wr_vs_normal(z, 2).value == pytest.approx(W2_ZEROS, abs=1e-10)
    assert wr_vs_normal(z, 3).value == pytest.approx(W3_ZEROS, abs=1e-10)


def test_point_mass_matches_quadrature():
    for c in (-1.3, 0.0, 0.7, 2.5):
        sample = np.array([c])
        for r in (1, 2, 3):
            expected = _quad_wrr_point_mass(c, r) ** (1.0 / r)
            assert wr_vs_normal(sample, r).value == pytest.approx(
                expected, rel=1e-9), (c, r)


def test_two_point_sample_matches_quadrature():
    # Split the real line at the median; each point covers one half.
    sample = np.array([-0.5, 1.5])
    for r in (1, 2, 3, 1.7):
        def integrand(t):
            x = sample[0] if t < 0.0 else sample[1]
            return abs(x - t) ** r * stats.norm.pdf(t)
        left, _ = integrate.quad(integrand, -12.0, 0.0, limit=400)
        right, _ = integrate.quad(integrand, 0.0, 12.0, limit=400)
        expected = (left + right) ** (1.0 / r)
        got = wr_vs_normal(sample, r).value
        tol = 1e-9 if r in (1, 2, 3) else 1e-6
        assert got == pytest.approx(expected, rel=tol), r


def test_non_integer_order_consistent_with_integer_neighbors():
    rng = np.random.default_rng(8)
    sample = np.sort(rng.normal(size=500) * 1.4)
    w1 = wr_vs_normal(sample, 1).value
    w2 = wr_vs_normal(sample, 2).value
    w15 = wr_vs_normal(sample, 1.5).value
    assert w1 <= w15 <= w2  # W_r is nondecreasing in r


def test_general_path_agrees_with_closed_form_at_integer_orders():
    rng = np.random.default_rng(21)
    sample = np.sort(rng.normal(size=300) + 0.2)
    for r_int, r_near in ((1, 1.0 + 1e-9), (2, 2.0 - 1e-9)):
        exact = wr_vs_normal(sample, r_int).value
        near = wr_vs_normal(sample, r_near).value
        assert near == pytest.approx(exact, rel=1e-5)


def test_gaussian_sample_quantiles_give_small_distance():
    # Plugging the true normal quantiles at midpoints leaves only the
    # within-slab discretization error, which shrinks with m.
    m = 4000
    sample = normal_quantile_array((np.arange(m) + 0.5) / m)
    assert wr_vs_normal(np.sort(sample), 1).value < 2e-3


def test_requires_sorted_input():
    with pytest.raises(DataError):
        wr_vs_normal(np.array([1.0, 0.0]), 1)


def test_rejects_bad_samples_and_orders():
    with pytest.raises(DataError):
        wr_vs_normal(np.array([]), 1)
    with pytest.raises(DataError):
        wr_vs_normal(np.array([0.0, np.nan]), 1)
    for r in (0.5, 3.5, -1.0):
        with pytest.raises(DomainError):
            wr_vs_normal(np.zeros(3), r)


def test_batched_pools_all_samples():
    rng = np.random.default_rng(4)
    xs = rng.normal(size=2000)
    est = wr_vs_normal_batched(xs, 1.0, batches=20)
    pooled = wr_vs_normal(np.sort(xs), 1.0)
    assert est.value == pytest.approx(pooled.value, rel=1e-12)
    assert est.m == 2000
    assert est.stderr > 0.0


def test_batched_stderr_tracks_spread():
    rng = np.random.default_rng(14)
    xs = rng.normal(size=4000)
    est = wr_vs_normal_batched(xs, 1.0, batches=10)
    # Batch W1 values at m=400 sit near the empirical floor ~ m^{-1/2};
    # their spread divided by sqrt(batches) stays well under the floor.
    assert 0.0 < est.stderr < 0.05


# ---------------------------------------------------------------------------
# Quantile function.
# ---------------------------------------------------------------------------

def test_quantile_matches_scipy():
    us = np.concatenate([np.array([1e-12, 1e-9, 1e-4, 0.5, 1.0 - 1e-4]),
                         np.linspace(0.001, 0.999, 101)])
    got = normal_quantile_array(us)
    want = stats.norm.ppf(us)
    assert np.max(np.abs(got - want)) < 1e-9


def test_quantile_scalar_and_domain():
    assert normal_quantile(0.5) == 0.0
    assert normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-9)
    for bad in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(DomainError):
            normal_quantile(bad)


def test_quantile_symmetry():
    us = np.linspace(1e-6, 0.5, 200)
    assert np.max(np.abs(normal_quantile_array(us)
                         + normal_quantile_array(1.0 - us))) < 1e-9


# ---------------------------------------------------------------------------
# Partial moments.
# ---------------------------------------------------------------------------

@given(st.floats(min_value=-6.0, max_value=6.0),
       st.floats(min_value=0.01, max_value=6.0))
@settings(max_examples=40, deadline=None)
def test_partial_moments_match_quadrature(a, width):
    b = a + width
    pm = gaussian_partial_moments(a, b)
    for k, got in enumerate((pm.m0, pm.m1, pm.m2, pm.m3)):
        want, _ = integrate.quad(lambda t: t ** k * stats.norm.pdf(t), a, b)
        assert got == pytest.approx(want, abs=1e-12), k


def test_partial_moments_infinite_endpoints():
    pm = gaussian_partial_moments(-np.inf, np.inf)
    assert pm.m0 == pytest.approx(1.0, abs=1e-15)
    assert pm.m1 == pytest.approx(0.0, abs=1e-15)
    assert pm.m2 == pytest.approx(1.0, abs=1e-15)
    assert pm.m3 == pytest.approx(0.0, abs=1e-15)
    half = gaussian_partial_moments(0.0, np.inf)
    assert half.m0 == pytest.approx(0.5, abs=1e-15)
    assert half.m1 == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-15)


def test_partial_moments_far_right_tail_stable():
    # sf-based evaluation keeps mass positive far in the tail.
    pm = gaussian_partial_moments(8.0, 9.0)
    assert 0.0 < pm.m0 < 1e-14
    assert pm.m2 > 0.0


# ---------------------------------------------------------------------------
# Smoothing, sine witness, region probability.
# ---------------------------------------------------------------------------

def test_gaussian_smooth_abs_closed_form():
    # E|x + sigma N| = x (2 Phi(x/sigma) - 1) + 2 sigma phi(x/sigma), x >= 0.
    for sigma in (0.5, 1.0, 2.0):
        for x in (0.0, 0.3, 1.7):
            want = (x * (2.0 * norm_cdf(x / sigma) - 1.0)
                    + 2.0 * sigma * norm_pdf(x / sigma))
            assert gaussian_smooth(abs, sigma, x) == pytest.approx(
                want, abs=1e-9)


def test_gaussian_smooth_of_sine_damps():
    # E sin(x + sigma N) = sin(x) exp(-sigma^2/2).
    for sigma in (0.7, 1.0):
        for x in (0.4, 2.0):
            want = math.sin(x) * math.exp(-sigma * sigma / 2.0)
            assert gaussian_smooth(math.sin, sigma, x) == pytest.approx(
                want, abs=1e-9)


def test_gaussian_smooth_rejects_non_finite():
    with pytest.raises(DataError):
        gaussian_smooth(lambda t: float("nan"), 1.0, 0.0)


def test_w1_lower_bound_sin_constant_sample():
    alpha = 0.5
    xs = np.full(200, 0.3)
    est = w1_lower_bound_sin(xs, alpha, batches=10)
    assert est.value == pytest.approx(alpha * math.sin(0.3 / alpha), rel=1e-12)
    assert est.stderr == pytest.approx(0.0, abs=1e-15)


def test_w1_lower_bound_sin_is_w1_lower_bound():
    # alpha*sin(x/alpha) is 1-Lipschitz with zero normal mean, so the witness
    # mean is dominated by the measured W1 on any sample.
    rng = np.random.default_rng(6)
    xs = rng.normal(size=4000) + 0.15
    est = w1_lower_bound_sin(xs, 0.8)
    w1 = wr_vs_normal(np.sort(xs), 1.0).value
    assert abs(est.value) <= w1 + 1e-12


def test_region_probability_small_kappa_limit():
    # cos(u) >= 1/2 covers one third of each period; for kappa -> 0 the
    # normal mass equidistributes over many periods.
    assert region_probability(1e-3) == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_region_probability_matches_direct_integration():
    # kappa scales the region: membership is cos(x / kappa) >= 1/2. Keep
    # kappa moderate so quad resolves the handful of indicator jumps.
    for kappa in (0.3, 1.0, 2.0):
        val, _ = integrate.quad(
            lambda t: stats.norm.pdf(t) * (math.cos(t / kappa) >= 0.5),
            -10.0, 10.0, limit=2000)
        assert region_probability(kappa) == pytest.approx(val, abs=1e-7), kappa


def test_region_probability_matches_arc_sum():
    # Independent oracle: enumerate the arcs 2*pi*k*kappa +- kappa*pi/3 and
    # sum scipy cdf differences over every arc that carries mass.
    for kappa in (0.02, 0.1463, 0.7):
        w = kappa * math.pi / 3.0
        period = 2.0 * math.pi * kappa
        total = 0.0
        k = 0
        while True:
            center = period * k
            lo, hi = center - w, center + w
            mass = stats.norm.cdf(hi) - stats.norm.cdf(lo)
            if k > 0:
                mass += stats.norm.cdf(-lo) - stats.norm.cdf(-hi)
            total += mass
            if center - w > 9.0:
                break
            k += 1
        assert region_probability(kappa) == pytest.approx(total, abs=1e-12)


def test_region_probability_agrees_with_membership_mc():
    rng = np.random.default_rng(13)
    draws = rng.normal(size=200_000)
    for kappa in (0.2, 0.9):
        hit = float(np.mean(in_scaled_region(draws, kappa)))
        p = region_probability(kappa)
        stderr = math.sqrt(p * (1.0 - p) / len(draws))
        assert abs(hit - p) < 4.0 * stderr, kappa


def test_region_probability_bounds():
    # Global: never below the 1/12 floor (the value actually stays >= 1/3,
    # climbing to 1 as the central arc swallows the distribution).
    for kappa in (1e-3, 0.1, 0.5, 1.0, 3.0, 10.0):
        p = region_probability(kappa)
        assert 1.0 / 12.0 <= p <= 1.0, kappa
    # At the scales used by the step models (alpha = 1/log n) the mass also
    # stays under 1/2.
    for n in (1e3, 1e4, 1e5):
        alpha = 1.0 / math.log(n)
        kappa = alpha / math.sqrt(1.0 - alpha * alpha)
        assert 1.0 / 12.0 <= region_probability(kappa) <= 0.5, n
