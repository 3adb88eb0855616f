"""Gauge construction, validation, ordering, inversion, and conjugates.

Closed-form oracles are frozen at the top; numerical routines are tested
against them and against independently computed suprema/integrals.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from martclt.errors import ConfigError, DomainError, InvalidNFunctionError
from martclt.nfunc import (KINDS, builtin_nfunctions, check_nfunction,
                           check_order, conjugate, default_check_grid,
                           exp_poly, exp_power, from_spec, g_inverse, inverse,
                           log_power, power, power_log, sqrt_arg_convex,
                           tabulated)

# ---------------------------------------------------------------------------
# Oracles (hand-derived closed forms, frozen before the tests below).
# ---------------------------------------------------------------------------

# phi(x) values at x = 2.
GAUGE_AT_2 = [
    (power(2), 4.0),
    (power(3), 8.0),
    (power(2.5), 2.0 ** 2.5),
    (power_log(), 4.0 * math.log(3.0)),
    (exp_poly(), math.e ** 2 - 3.0),
    (exp_power(1.5), math.exp(2.0 ** 1.5) - 1.0),
    (log_power(2.0), math.exp(math.log(3.0) ** 2) - 1.0),
]

# Conjugate of x^p is (p-1) * (y/p)^{p/(p-1)}; at p=3, y=1: 2*(1/3)^{3/2}.
CONJ_POWER3_AT_1 = 2.0 * (1.0 / 3.0) ** 1.5
# Conjugate of e^x - x - 1 is (1+y)log(1+y) - y; at y=1: 2 log 2 - 1.
CONJ_EXP_POLY_AT_1 = 2.0 * math.log(2.0) - 1.0


def test_gauge_values_match_closed_forms():
    for nf, expected in GAUGE_AT_2:
        assert nf(2.0) == pytest.approx(expected, rel=1e-14), nf.label()


def test_gauge_vanishes_at_zero():
    for nf in builtin_nfunctions():
        assert nf(0.0) == 0.0


def test_builtin_gauges_pass_validation():
    for nf in builtin_nfunctions():
        report = check_nfunction(nf)
        assert report.passed, (nf.label(), report.failed_predicate)


def test_check_rejects_slow_growth():
    # phi(x) = x fails the phi(x)/x -> 0 requirement.
    report = check_nfunction(power(1.0))
    assert not report.passed
    assert "phi(x)/x" in report.failed_predicate


def test_check_grid_requirements():
    with pytest.raises(ConfigError):
        check_nfunction(power(2), np.geomspace(1e-6, 1e6, 50))
    with pytest.raises(ConfigError):
        check_nfunction(power(2), np.geomspace(1e-3, 1e6, 200))


def test_check_flags_nan():
    with pytest.raises(InvalidNFunctionError):
        check_nfunction(_NaNGauge())


class _NaNGauge:
    kind = "broken"
    params = ()

    def label(self):
        return "broken"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = x ** 2
        return np.where(x > 1e3, np.nan, out)


def test_from_spec_round_trip():
    assert from_spec("power:2.5").params == (2.5,)
    assert from_spec("power_log").kind == "power_log"
    assert from_spec("exp_poly").kind == "exp_poly"
    assert from_spec("exp_power:1.5").params == (1.5,)
    assert from_spec("log_power:2").params == (2.0,)
    with pytest.raises(ConfigError):
        from_spec("nosuch:1")
    with pytest.raises(ConfigError):
        from_spec("power:0.5")
    with pytest.raises(ConfigError):
        from_spec("exp_power:1.0")  # needs beta > 1
    with pytest.raises(ConfigError):
        from_spec("log_power:1.0")


def test_kinds_constant():
    assert set(KINDS) == {"power", "power_log", "exp_poly", "exp_power",
                          "log_power", "tabulated"}


def test_tabulated_interpolates_and_extends():
    xs = np.geomspace(1e-7, 1e7, 80)
    nf = tabulated(xs, xs ** 3)
    for x in (1e-4, 0.37, 5.0, 2e4):
        assert nf(x) == pytest.approx(x ** 3, rel=1e-3)
    # Edge-slope extension keeps the gauge increasing outside the table.
    assert nf(1e8) > nf(1e7)
    assert check_nfunction(nf).passed


def test_tabulated_rejects_bad_tables():
    from martclt.errors import DataError
    with pytest.raises(DataError):
        tabulated((1.0, 2.0), (4.0, 1.0))  # decreasing values
    with pytest.raises(DataError):
        tabulated((2.0, 1.0), (1.0, 4.0))  # unsorted abscissae


# ---------------------------------------------------------------------------
# Ordering.
# ---------------------------------------------------------------------------

ORDERED_PAIRS = [
    (power(2), power(3)),
    (power(2), power_log()),
    (power_log(), power(3)),
    (power(3), power(5)),
    (power(2), exp_poly()),
    (power(1.5), exp_power(1.5)),
]


def test_check_order_known_pairs():
    grid = default_check_grid()
    for lo, hi in ORDERED_PAIRS:
        assert check_order(lo, hi, grid), (lo.label(), hi.label())
        assert not check_order(hi, lo, grid), (hi.label(), lo.label())


def test_check_order_detects_crossing_ratio():
    # exp(ln(1+x)^2)-1 tracks x^2 near zero but overtakes every power at
    # infinity, so its ratio against x^2 is non-monotone: incomparable.
    grid = default_check_grid()
    assert not check_order(power(2), log_power(2.0), grid)
    assert not check_order(log_power(2.0), power(2), grid)


def test_check_order_reflexive():
    grid = default_check_grid()
    for nf in builtin_nfunctions():
        assert check_order(nf, nf, grid)


def test_power_log_sits_between_squares_and_cubes():
    grid = default_check_grid()
    assert check_order(power(2), power_log(), grid)
    assert check_order(power_log(), power(3), grid)


# ---------------------------------------------------------------------------
# Inversion.
# ---------------------------------------------------------------------------

@given(st.floats(min_value=1e-4, max_value=1e4),
       st.sampled_from([2.0, 2.5, 3.0, 5.0]))
@settings(max_examples=60, deadline=None)
def test_inverse_round_trip_power(y, p):
    x = inverse(power(p), y)
    assert x == pytest.approx(y ** (1.0 / p), rel=1e-9)


def test_inverse_round_trip_all_builtins():
    for nf in builtin_nfunctions():
        for y in (0.5, 1.0, 7.0, 300.0):
            x = inverse(nf, y)
            assert nf(x) == pytest.approx(y, rel=1e-9), nf.label()


def test_inverse_at_zero():
    assert inverse(power(2), 0.0) == 0.0


def test_g_inverse_power_closed_form():
    # phi(x)/x = x^{p-1}; solving = y gives y^{1/(p-1)}.
    for p in (2.0, 3.0, 5.0):
        for y in (0.3, 1.0, 64.0):
            assert g_inverse(power(p), y) == pytest.approx(
                y ** (1.0 / (p - 1.0)), rel=1e-8)


def test_g_inverse_solves_ratio_equation():
    for nf in (power_log(), exp_poly()):
        for y in (0.5, 4.0, 90.0):
            x = g_inverse(nf, y)
            assert nf(x) / x == pytest.approx(y, rel=1e-8), nf.label()


# ---------------------------------------------------------------------------
# Conjugates.
# ---------------------------------------------------------------------------

def test_conjugate_closed_forms():
    assert conjugate(power(3))(1.0) == pytest.approx(CONJ_POWER3_AT_1, rel=1e-12)
    assert conjugate(exp_poly())(1.0) == pytest.approx(CONJ_EXP_POLY_AT_1, rel=1e-12)
    # Conjugate of x^2 is y^2/4.
    cp = conjugate(power(2))
    for y in (0.1, 1.0, 9.0):
        assert cp(y) == pytest.approx(y * y / 4.0, rel=1e-12)


def test_numeric_conjugate_matches_analytic_on_powers():
    # Force the numeric path through a tabulated copy of x^2.5.
    xs = np.geomspace(1e-8, 1e8, 4000)
    tab = tabulated(xs, xs ** 2.5)
    num = conjugate(tab)
    ana = conjugate(power(2.5))
    for y in (0.2, 1.0, 30.0):
        assert num(y) == pytest.approx(ana(y), rel=1e-3)


def test_conjugate_at_zero_is_zero():
    for nf in builtin_nfunctions():
        assert conjugate(nf)(0.0) == 0.0


@given(st.floats(min_value=1e-3, max_value=50.0),
       st.floats(min_value=1e-3, max_value=50.0))
@settings(max_examples=80, deadline=None)
def test_young_inequality_pointwise(x, y):
    for nf in (power(2), power(3), power_log(), exp_poly()):
        phi_star = conjugate(nf)
        assert x * y <= nf(x) + phi_star(y) + 1e-8 * max(1.0, x * y)


def test_biconjugate_recovers_convex_gauge():
    # phi** = phi for closed convex gauges; check phi**(x) >= phi(x) - tol
    # and <= phi(x) at sampled points via the numeric supremum.
    nf = power(3)
    phi_star = conjugate(nf)

    def biconj(x):
        ys = np.geomspace(1e-3, 1e3, 400)
        return float(np.max(x * ys - np.array([phi_star(t) for t in ys])))

    for x in (0.5, 1.0, 2.0):
        b = biconj(x)
        assert b <= nf(x) + 1e-9
        assert b >= nf(x) - 1e-2 * max(1.0, nf(x))


def test_conjugate_inverse_round_trip():
    cp = conjugate(power(3))
    for z in (0.1, 1.0, 25.0):
        assert cp(cp.inverse(z)) == pytest.approx(z, rel=1e-8)


def test_conjugate_rejects_negative_argument():
    with pytest.raises(DomainError):
        conjugate(power(2))(-1.0)


def test_conjugate_needs_superlinear_power():
    with pytest.raises(DomainError):
        conjugate(power(1.0))


# ---------------------------------------------------------------------------
# Convexity of phi(sqrt(x)).
# ---------------------------------------------------------------------------

def test_sqrt_arg_convexity_known_cases():
    # x^p composed with sqrt gives x^{p/2}: convex iff p >= 2.
    assert sqrt_arg_convex(power(2))
    assert sqrt_arg_convex(power(3))
    assert sqrt_arg_convex(power(5))
    assert not sqrt_arg_convex(power(1.5))


def test_power_log_sqrt_arg_convex():
    # x log(sqrt(x)+1) has nonnegative second derivative on x > 0.
    assert sqrt_arg_convex(power_log())
