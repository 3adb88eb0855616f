"""Generative martingale-difference models with analytic conditional laws.

Each model specifies, for every step i, the conditional law of the increment
Y_i given the realized history; the laws are closed-form (Gaussian, finite
discrete, or finite Gaussian scale mixtures), so per-step conditional
variances, truncated moments, and population Orlicz/Lyapunov quantities are
exact rather than estimated.

Built-in models, all normalized so that s_n^2 = sum_i E[Y_i^2] is 1 (or the
schedule total for the i.i.d. kinds):

* ``iid_gaussian``   -- independent N(0, v_i), default v_i = 1/n. The
  normalized sum is exactly standard normal.
* ``iid_rademacher`` -- independent +-scale_i coin flips, default 1/sqrt(n).
* ``example_5_1``    -- with a = 1/log n: a Gaussian bulk of n-2 steps with
  variance (1-2a^2)/(n-2), a step that is a*eta (eta in {1/2, -2} with
  probabilities (4/5, 1/5)) when the running sum lies in a*A (A the
  2*pi-periodic set {cos >= 1/2}) and N(0, a^2) otherwise, and a final
  N(0, a^2) step. Both branches of the indicator step have conditional
  variance a^2, so V_n^2 = 1 almost surely, while the conditional law — and
  hence the distance to normal — retains an a-sized asymmetry.
* ``example_5_2``    -- the de-correlation counterpart: the indicator step is
  a*eta inside the region and 0 outside, and the final step variance
  a^2*(1 - P(N in kappa*A)) with kappa = a/sqrt(1-a^2) restores the total to
  1 in expectation only, so V_n^2 - 1 = a^2*(1{in region} - P(in region)).
* ``b_mixture``      -- Y_i = sqrt(B/n)*xi_i with B in {1/2, 3/2} equiprobable
  and revealed in the filtration from step 1 on: sigma_1^2 = 1/n (B unknown
  at time 0) and sigma_i^2 = B/n afterwards. The normalized sum is exactly
  sqrt(B)*N for every n, so the distance to normal does not vanish.

Sampling is counter-based: each path consumes a fixed layout of uniform
slots derived from its seed (branches skip the slots their branch does not
use), so ensembles are reproducible and embarrassingly parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import erf
from scipy.stats import binom

from .errors import ConfigError, DataError, DomainError
from .rng import uniform_block, uniform_slot
from .wasserstein import QUANTILE_U_MIN, normal_quantile_array, region_probability

MODEL_KINDS = ("iid_gaussian", "iid_rademacher", "example_5_1", "example_5_2",
               "b_mixture")

_TWO_PI = 2.0 * math.pi
_ARC_HALF_WIDTH = math.pi / 3.0
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
# The indicator-step multiplier eta: mean 0.8*0.5 - 0.2*2 = 0 and second
# moment 0.8*0.25 + 0.2*4 = 1 exactly.
_ETA_VALUES = (0.5, -2.0)
_ETA_PROBS = (0.8, 0.2)
# Chunk rows so fallback path ensembles stay within ~tens of MB.
_MAX_BLOCK_ELEMENTS = 1 << 21


def _seq_sum(values) -> float:
    """Left-to-right accumulation; shared by s_n^2, V_n^2, and the stopping
    rule so that their float comparisons are mutually consistent."""
    return float(np.add.accumulate(np.asarray(values, dtype=float))[-1])


def _gauss(u: np.ndarray) -> np.ndarray:
    """Standard normal variates from (0,1) uniforms by inverse CDF. Uniforms
    can come arbitrarily close to 0/1; clipping to the quantile domain maps
    at most ~2e-12 of the mass onto +-7 sigma."""
    return normal_quantile_array(np.clip(u, QUANTILE_U_MIN, 1.0 - QUANTILE_U_MIN))


def _eta(u: np.ndarray) -> np.ndarray:
    return np.where(u < _ETA_PROBS[0], _ETA_VALUES[0], _ETA_VALUES[1])


def in_scaled_region(x, alpha: float):
    """Membership of x in alpha*A for A = {t : cos t >= 1/2}, i.e. arcs of
    half-width pi/3 around 2*pi*Z. Uses the reduced angle of x/alpha, which
    stays exact for |x| >> alpha where cos(x/alpha) itself loses digits."""
    reduced = np.remainder(np.asarray(x, dtype=float) / alpha, _TWO_PI)
    return np.minimum(reduced, _TWO_PI - reduced) <= _ARC_HALF_WIDTH


# ---------------------------------------------------------------------------
# Conditional laws

@dataclass(frozen=True)
class ConditionalLaw:
    """A closed-form mean-zero law of one increment given the history.

    Forms: ``gaussian`` (one variance), ``discrete`` (finite support with
    probabilities), ``gaussian_mixture`` (finite scale mixture of centered
    Gaussians). All moments used downstream are finite sums or Gaussian
    partial moments.
    """

    form: str
    points: tuple = ()
    probs: tuple = ()
    variances: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        if self.form == "gaussian":
            if len(self.variances) != 1 or self.variances[0] < 0:
                raise DataError("gaussian law needs one nonnegative variance")
        elif self.form == "discrete":
            if len(self.points) == 0 or len(self.points) != len(self.probs):
                raise DataError("discrete law needs matching points/probs")
            if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-12:
                raise DataError("discrete law probabilities must be a distribution")
            scale = max(abs(x) for x in self.points) + 1.0
            if abs(sum(p * x for p, x in zip(self.probs, self.points))) > 1e-12 * scale:
                raise DataError("conditional law must have mean 0")
        elif self.form == "gaussian_mixture":
            if len(self.variances) == 0 or len(self.variances) != len(self.weights):
                raise DataError("mixture law needs matching variances/weights")
            if any(v < 0 for v in self.variances) or any(w < 0 for w in self.weights):
                raise DataError("mixture law needs nonnegative components")
            if abs(sum(self.weights) - 1.0) > 1e-12:
                raise DataError("mixture weights must sum to 1")
        else:
            raise DataError(f"unknown conditional law form {self.form!r}")

    @staticmethod
    def gaussian(variance: float) -> "ConditionalLaw":
        return ConditionalLaw("gaussian", variances=(float(variance),))

    @staticmethod
    def discrete(points, probs) -> "ConditionalLaw":
        return ConditionalLaw("discrete", points=tuple(float(x) for x in points),
                              probs=tuple(float(p) for p in probs))

    @staticmethod
    def gaussian_mixture(variances, weights) -> "ConditionalLaw":
        return ConditionalLaw("gaussian_mixture",
                              variances=tuple(float(v) for v in variances),
                              weights=tuple(float(w) for w in weights))

    @property
    def variance(self) -> float:
        if self.form == "gaussian":
            return self.variances[0]
        if self.form == "discrete":
            return float(sum(p * x * x for p, x in zip(self.probs, self.points)))
        return float(sum(w * v for w, v in zip(self.weights, self.variances)))


def _eta_law(alpha: float) -> ConditionalLaw:
    return ConditionalLaw.discrete((alpha * _ETA_VALUES[0], alpha * _ETA_VALUES[1]),
                                   _ETA_PROBS)


@dataclass(frozen=True)
class TruncatedMoments:
    """Moments of Y restricted to {|Y| <= a}: the truncated mean, the
    truncated second moment, and the variance of the truncated-and-centered
    variable (second moment minus squared mean)."""

    mean: float
    second: float
    variance: float


def _gaussian_trunc_second(variance: float, a: float) -> float:
    """E[Y^2 1{|Y| <= a}] for Y ~ N(0, v): v*(2*Phi(c)-1 - 2*c*phi(c)) with
    c = a/sqrt(v). The factor is computed as erf minus a positive term, so
    it never exceeds 1 and the result never exceeds v."""
    if variance <= 0.0:
        return 0.0
    c = a / math.sqrt(variance)
    factor = erf(c / _SQRT2) - 2.0 * c * math.exp(-0.5 * c * c) / _SQRT2PI
    return variance * max(factor, 0.0)


def conditional_trunc_moments(law: ConditionalLaw, a: float) -> TruncatedMoments:
    """Exact moments of the truncation Y*1{|Y| <= a} under a per-step law.

    Symmetric forms (Gaussian, Gaussian mixtures) have truncated mean 0;
    discrete forms are finite sums.
    """
    if not a > 0:
        raise DomainError("truncation level must be positive")
    if law.form == "gaussian":
        m2 = _gaussian_trunc_second(law.variances[0], a)
        return TruncatedMoments(0.0, m2, m2)
    if law.form == "discrete":
        pts = np.asarray(law.points)
        pr = np.asarray(law.probs)
        keep = np.abs(pts) <= a
        m1 = float(np.sum(pr * pts * keep))
        m2 = float(np.sum(pr * pts * pts * keep))
        return TruncatedMoments(m1, m2, m2 - m1 * m1)
    if law.form == "gaussian_mixture":
        m2 = float(sum(w * _gaussian_trunc_second(v, a)
                       for w, v in zip(law.weights, law.variances)))
        return TruncatedMoments(0.0, m2, m2)
    raise NotImplementedError(f"truncated moments for law form {law.form!r}")


# ---------------------------------------------------------------------------
# Models

@dataclass(frozen=True)
class MdsModel:
    """An immutable model description. ``schedule`` holds the deterministic
    per-step conditional variances when they are path-independent
    (i.i.d. kinds and example_5_1); ``region_prob`` caches P(N in kappa*A)
    for example_5_2."""

    kind: str
    n: int
    s_n2: float
    alpha: Optional[float] = None
    region_prob: Optional[float] = None
    schedule: Optional[tuple] = None

    @property
    def s_n(self) -> float:
        return math.sqrt(self.s_n2)

    @property
    def n_slots(self) -> int:
        """Uniform slots consumed per path (fixed layout; unused branch
        slots are reserved, not re-used)."""
        if self.kind == "example_5_1":
            return self.n + 1  # bulk, xi, eta, last
        if self.kind == "b_mixture":
            return self.n + 1  # B, then one per step
        return self.n

    def min_sigma(self) -> float:
        """Largest sigma with P(sigma_i >= sigma for all i) = 1, or 0 when
        some conditional standard deviation can vanish."""
        if self.kind in ("iid_gaussian", "iid_rademacher", "example_5_1"):
            return math.sqrt(min(self.schedule))
        if self.kind == "example_5_2":
            return 0.0  # the indicator step has variance 0 off the region
        return math.sqrt(0.5 / self.n)


def _schedule_from(param, n: int, default: float, name: str) -> np.ndarray:
    if param is None:
        values = np.full(n, default)
    else:
        values = np.atleast_1d(np.asarray(param, dtype=float))
        if values.size == 1:
            values = np.full(n, float(values[0]))
        if values.shape != (n,):
            raise ConfigError(f"{name} must be a scalar or length-{n} sequence")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ConfigError(f"{name} entries must be finite and nonnegative")
    if not values.sum() > 0:
        raise ConfigError(f"{name} must have positive total")
    return values


def make_model(kind: str, n: int, *, variance=None, scale=None) -> MdsModel:
    """Construct a validated model. Examples use alpha = 1/log n; the first
    example needs 1 - 2*alpha^2 > 0, hence n >= 5."""
    if kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")
    n = int(n)
    if kind == "iid_gaussian":
        if n < 1:
            raise ConfigError("iid_gaussian needs n >= 1")
        sched = _schedule_from(variance, n, 1.0 / n, "variance")
        return MdsModel(kind, n, _seq_sum(sched), schedule=tuple(sched))
    if kind == "iid_rademacher":
        if n < 1:
            raise ConfigError("iid_rademacher needs n >= 1")
        scales = _schedule_from(scale, n, 1.0 / math.sqrt(n), "scale")
        sched = scales * scales
        return MdsModel(kind, n, _seq_sum(sched), schedule=tuple(sched))
    if variance is not None or scale is not None:
        raise ConfigError(f"{kind} takes no variance/scale parameters")
    if kind == "example_5_1":
        if n < 5:
            raise ConfigError("example_5_1 needs n >= 5 so the bulk variance "
                              "(1-2*alpha^2)/(n-2) is positive")
        alpha = 1.0 / math.log(n)
        bulk = (1.0 - 2.0 * alpha * alpha) / (n - 2)
        sched = np.concatenate((np.full(n - 2, bulk), [alpha ** 2, alpha ** 2]))
        return MdsModel(kind, n, _seq_sum(sched), alpha=alpha, schedule=tuple(sched))
    if kind == "example_5_2":
        if n < 3:
            raise ConfigError("example_5_2 needs n >= 3")
        alpha = 1.0 / math.log(n)
        q = region_probability(alpha / math.sqrt(1.0 - alpha * alpha))
        bulk = (1.0 - alpha * alpha) / (n - 2)
        marginal = np.concatenate((np.full(n - 2, bulk),
                                   [alpha ** 2 * q, alpha ** 2 * (1.0 - q)]))
        return MdsModel(kind, n, _seq_sum(marginal), alpha=alpha, region_prob=q)
    if n < 1:
        raise ConfigError("b_mixture needs n >= 1")
    return MdsModel(kind, n, _seq_sum(np.full(n, 1.0 / n)))


# ---------------------------------------------------------------------------
# Path and ensemble simulation

@dataclass(frozen=True)
class MdsPath:
    """One simulated path: increments y, exact conditional variances sigma2,
    normalized partial sums x (cumulative sum of y/s_n), the model total
    s_n2, and v_n2 = (sequential sum of sigma2)/s_n2."""

    y: np.ndarray
    sigma2: np.ndarray
    x: np.ndarray
    s_n2: float
    v_n2: float


def _bulk_prefix_sums(y: np.ndarray, k: int) -> np.ndarray:
    """Row sums of the first k increments; the single place that computes
    the indicator-step argument, so simulation and law reconstruction agree
    bit for bit."""
    return np.sum(y[:, :k], axis=1)


def simulate_ensemble(model: MdsModel, seeds) -> tuple:
    """Vectorized simulation of one path per seed.

    Returns (y, sigma2), both R x n, with sigma2 the exact analytic
    conditional variances along each path.
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.uint64))
    reps = len(seeds)
    n = model.n
    u = uniform_block(seeds, model.n_slots)

    if model.kind == "iid_gaussian":
        sched = np.asarray(model.schedule)
        y = np.sqrt(sched)[None, :] * _gauss(u)
        return y, np.tile(sched, (reps, 1))
    if model.kind == "iid_rademacher":
        sched = np.asarray(model.schedule)
        y = np.sqrt(sched)[None, :] * np.where(u >= 0.5, 1.0, -1.0)
        return y, np.tile(sched, (reps, 1))
    if model.kind == "example_5_1":
        alpha = model.alpha
        y = np.empty((reps, n))
        bulk = model.schedule[0]
        y[:, :n - 2] = math.sqrt(bulk) * _gauss(u[:, :n - 2])
        region = in_scaled_region(_bulk_prefix_sums(y, n - 2), alpha)
        y[:, n - 2] = np.where(region, alpha * _eta(u[:, n - 1]),
                               alpha * _gauss(u[:, n - 2]))
        y[:, n - 1] = alpha * _gauss(u[:, n])
        return y, np.tile(np.asarray(model.schedule), (reps, 1))
    if model.kind == "example_5_2":
        alpha, q = model.alpha, model.region_prob
        bulk = (1.0 - alpha * alpha) / (n - 2)
        y = np.empty((reps, n))
        sigma2 = np.empty((reps, n))
        y[:, :n - 2] = math.sqrt(bulk) * _gauss(u[:, :n - 2])
        sigma2[:, :n - 2] = bulk
        region = in_scaled_region(_bulk_prefix_sums(y, n - 2), alpha)
        y[:, n - 2] = np.where(region, alpha * _eta(u[:, n - 2]), 0.0)
        sigma2[:, n - 2] = np.where(region, alpha ** 2, 0.0)
        last_var = alpha ** 2 * (1.0 - q)
        y[:, n - 1] = math.sqrt(last_var) * _gauss(u[:, n - 1])
        sigma2[:, n - 1] = last_var
        return y, sigma2
    # b_mixture
    b = np.where(u[:, 0] >= 0.5, 1.5, 0.5)
    y = np.sqrt(b / n)[:, None] * _gauss(u[:, 1:])
    sigma2 = np.empty((reps, n))
    sigma2[:, 0] = 1.0 / n
    if n > 1:
        sigma2[:, 1:] = (b / n)[:, None]
    return y, sigma2


def simulate_path(model: MdsModel, seed: int) -> MdsPath:
    """One deterministic path for a 64-bit seed."""
    y2, sigma2_2 = simulate_ensemble(model, np.array([seed], dtype=np.uint64))
    y, sigma2 = y2[0], sigma2_2[0]
    x = np.add.accumulate(y / model.s_n)
    return MdsPath(y, sigma2, x, model.s_n2, _seq_sum(sigma2) / model.s_n2)


def path_laws(model: MdsModel, path: MdsPath) -> tuple:
    """The per-step conditional law along a realized path, one per increment,
    reconstructed from the same branch test the simulation used."""
    n = model.n
    if model.kind == "iid_gaussian":
        return tuple(ConditionalLaw.gaussian(v) for v in model.schedule)
    if model.kind == "iid_rademacher":
        return tuple(ConditionalLaw.discrete((-math.sqrt(v), math.sqrt(v)), (0.5, 0.5))
                     if v > 0 else ConditionalLaw.discrete((0.0,), (1.0,))
                     for v in model.schedule)
    if model.kind == "example_5_1":
        alpha = model.alpha
        bulk_law = ConditionalLaw.gaussian(model.schedule[0])
        region = bool(in_scaled_region(_bulk_prefix_sums(path.y[None, :], n - 2),
                                       alpha)[0])
        step = _eta_law(alpha) if region else ConditionalLaw.gaussian(alpha ** 2)
        return (bulk_law,) * (n - 2) + (step, ConditionalLaw.gaussian(alpha ** 2))
    if model.kind == "example_5_2":
        alpha, q = model.alpha, model.region_prob
        bulk_law = ConditionalLaw.gaussian((1.0 - alpha * alpha) / (n - 2))
        region = bool(in_scaled_region(_bulk_prefix_sums(path.y[None, :], n - 2),
                                       alpha)[0])
        step = _eta_law(alpha) if region else ConditionalLaw.discrete((0.0,), (1.0,))
        return (bulk_law,) * (n - 2) + (
            step, ConditionalLaw.gaussian(alpha ** 2 * (1.0 - q)))
    first = ConditionalLaw.gaussian_mixture((0.5 / n, 1.5 / n), (0.5, 0.5))
    if n == 1:
        return (first,)
    b = 1.5 if path.sigma2[1] * n > 1.0 else 0.5
    return (first,) + (ConditionalLaw.gaussian(b / n),) * (n - 1)


# ---------------------------------------------------------------------------
# Exact-law sampling of the normalized final sum

def _rademacher_final_sums(model: MdsModel, seeds: np.ndarray) -> np.ndarray:
    """For a constant scale the final sum is scale*(2K - n)/s_n with
    K ~ Binomial(n, 1/2); one uniform per path via the CDF table."""
    n = model.n
    cdf = binom.cdf(np.arange(n + 1), n, 0.5)
    u = uniform_slot(seeds, 0)
    k = np.searchsorted(cdf, u, side="left").astype(float)
    scale = math.sqrt(model.schedule[0])
    return scale * (2.0 * k - n) / model.s_n


def _fallback_final_sums(model: MdsModel, seeds: np.ndarray) -> np.ndarray:
    out = np.empty(len(seeds))
    rows = max(1, _MAX_BLOCK_ELEMENTS // max(model.n_slots, 1))
    for start in range(0, len(seeds), rows):
        block = seeds[start:start + rows]
        y, _ = simulate_ensemble(model, block)
        out[start:start + rows] = np.sum(y, axis=1) / model.s_n
    return out


def sample_final_sums(model: MdsModel, seeds) -> np.ndarray:
    """Draw X_n = (1/s_n)*sum_i Y_i, one per seed, from its exact law.

    Every built-in model admits a sufficient-statistic shortcut (the bulk of
    Gaussian steps collapses to a single Gaussian), so the cost per draw is
    O(1) instead of O(n); custom schedules fall back to full simulation.
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.uint64))
    n = model.n
    if model.kind == "iid_gaussian":
        # Sum of independent centered Gaussians with total variance s_n^2.
        return _gauss(uniform_slot(seeds, 0))
    if model.kind == "iid_rademacher":
        if len(set(model.schedule)) == 1:
            return _rademacher_final_sums(model, seeds)
        return _fallback_final_sums(model, seeds)
    if model.kind == "example_5_1":
        alpha = model.alpha
        pre = math.sqrt(1.0 - 2.0 * alpha * alpha) * _gauss(uniform_slot(seeds, 0))
        region = in_scaled_region(pre, alpha)
        u_step = uniform_slot(seeds, 1)
        step = np.where(region, alpha * _eta(u_step), alpha * _gauss(u_step))
        last = alpha * _gauss(uniform_slot(seeds, 2))
        return (pre + step + last) / model.s_n
    if model.kind == "example_5_2":
        alpha, q = model.alpha, model.region_prob
        pre = math.sqrt(1.0 - alpha * alpha) * _gauss(uniform_slot(seeds, 0))
        region = in_scaled_region(pre, alpha)
        step = np.where(region, alpha * _eta(uniform_slot(seeds, 1)), 0.0)
        last = alpha * math.sqrt(1.0 - q) * _gauss(uniform_slot(seeds, 2))
        return (pre + step + last) / model.s_n
    b = np.where(uniform_slot(seeds, 0) >= 0.5, 1.5, 0.5)
    return np.sqrt(b) * _gauss(uniform_slot(seeds, 1)) / model.s_n


# ---------------------------------------------------------------------------
# Population summaries (marginal step laws, exact V-norms)

def marginal_step_groups(model: MdsModel) -> tuple:
    """The unconditional law of each increment, compressed as
    (count, ((weight, law), ...)) groups of identical steps.

    Steps whose conditional law depends on the history appear as finite
    mixtures weighted by the exact branch probabilities.
    """
    n = model.n
    if model.kind in ("iid_gaussian", "iid_rademacher"):
        counts: dict = {}
        for v in model.schedule:
            counts[v] = counts.get(v, 0) + 1
        if model.kind == "iid_gaussian":
            return tuple((c, ((1.0, ConditionalLaw.gaussian(v)),))
                         for v, c in counts.items())
        return tuple(
            (c, ((1.0, ConditionalLaw.discrete((-math.sqrt(v), math.sqrt(v)),
                                               (0.5, 0.5))
                  if v > 0 else ConditionalLaw.discrete((0.0,), (1.0,))),))
            for v, c in counts.items())
    if model.kind == "example_5_1":
        alpha = model.alpha
        # The running sum before the indicator step is N(0, 1-2*alpha^2).
        rho = region_probability(alpha / math.sqrt(1.0 - 2.0 * alpha * alpha))
        return (
            (n - 2, ((1.0, ConditionalLaw.gaussian(model.schedule[0])),)),
            (1, ((rho, _eta_law(alpha)),
                 (1.0 - rho, ConditionalLaw.gaussian(alpha ** 2)))),
            (1, ((1.0, ConditionalLaw.gaussian(alpha ** 2)),)),
        )
    if model.kind == "example_5_2":
        alpha, q = model.alpha, model.region_prob
        return (
            (n - 2, ((1.0, ConditionalLaw.gaussian((1.0 - alpha ** 2) / (n - 2))),)),
            (1, ((q, _eta_law(alpha)),
                 (1.0 - q, ConditionalLaw.discrete((0.0,), (1.0,))))),
            (1, ((1.0, ConditionalLaw.gaussian(alpha ** 2 * (1.0 - q))),)),
        )
    return ((n, ((0.5, ConditionalLaw.gaussian(0.5 / n)),
                 (0.5, ConditionalLaw.gaussian(1.5 / n)))),)


def analytic_v_norm(model: MdsModel, q: float) -> float:
    """Exact ||V_n^2 - 1||_q (the raw norm, before any outer exponent).

    i.i.d. models and example_5_1 have V_n^2 = 1 almost surely; example_5_2
    has V_n^2 - 1 = alpha^2*(1{region} - rho) with rho the region
    probability; b_mixture has |V_n^2 - 1| = (n-1)/(2n) on both branches.
    """
    if not q > 0:
        raise DomainError("norm order q must be positive")
    if model.kind in ("iid_gaussian", "iid_rademacher", "example_5_1"):
        return 0.0
    if model.kind == "example_5_2":
        rho = model.region_prob
        moment = rho * (1.0 - rho) ** q + (1.0 - rho) * rho ** q
        return model.alpha ** 2 * moment ** (1.0 / q)
    return (model.n - 1) / (2.0 * model.n)
