"""Truncation and Gaussian elongation of martingale increments.

Given increments Y_i with exact conditional laws, the bounded surrogate is

    Z_i = Y_i 1{|Y_i| <= a/2} - E[Y_i 1{|Y_i| <= a/2} | F_{i-1}],

which is again a martingale difference with |Z_i| <= a and per-step
conditional variance var_i(Z) = E[Y_i^2 1] - (E[Y_i 1])^2 <= sigma_i^2(Y),
both in closed form from the model's conditional laws. The stopping index

    T = min{ m : sum_{i<=m} var_i(Z) > s_n^2 }   (n+1 if never exceeded)

cuts the sequence where its accumulated conditional variance would first
overshoot the target total, and the elongated sequence keeps Z_1..Z_{T-1},
zeroes the rest, and appends one Gaussian increment

    Yhat_{n+1} = xi * (s_n^2 - sum_{i<=T-1} var_i(Z))^{1/2},  xi ~ N(0,1),

so that sum_{i=1}^{n+1} var_i(Yhat) = s_n^2 exactly by construction. All
cumulative comparisons use left-to-right accumulation, matching how the
models compute s_n^2, so an untruncated deterministic-variance path keeps
T = n+1 with a zero tail increment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import DomainError, MartcltError
from .mds import (MdsModel, MdsPath, _bulk_prefix_sums, _eta_law, _gauss,
                  conditional_trunc_moments, in_scaled_region)
from .rng import uniform_slot

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
_RADICAND_FLOOR = -1e-12


@dataclass(frozen=True)
class ModifiedPath:
    """The truncated increments, their exact conditional variances, the
    stopping index t_stop in {1..n+1}, and the elongated sequence of n+1
    increments whose conditional variances total s_n^2 exactly."""

    z: np.ndarray
    sigma2_z: np.ndarray
    t_stop: int
    y_hat: np.ndarray
    sigma2_hat: np.ndarray
    alpha: float


def _gaussian_trunc_second_array(variance: np.ndarray, a: float) -> np.ndarray:
    """Vectorized E[Y^2 1{|Y| <= a}] for Y ~ N(0, v); zero-variance entries
    stay zero."""
    v = np.asarray(variance, dtype=float)
    out = np.zeros_like(v)
    pos = v > 0
    c = a / np.sqrt(v[pos])
    factor = erf(c / _SQRT2) - 2.0 * c * np.exp(-0.5 * c * c) / _SQRT2PI
    out[pos] = v[pos] * np.maximum(factor, 0.0)
    return out


def truncate_ensemble(model: MdsModel, y: np.ndarray, sigma2: np.ndarray,
                      alpha: float) -> tuple:
    """Truncate-and-center a simulated ensemble at level alpha.

    Returns (z, sigma2_z), both R x n, with conditional truncated means and
    variances taken from the closed-form per-step laws (symmetric steps have
    truncated mean 0; the discrete indicator step has a finite-sum mean).
    alpha = inf leaves the ensemble unchanged.
    """
    if not alpha > 0:
        raise DomainError("truncation level alpha must be positive")
    if math.isinf(alpha):
        return y.copy(), sigma2.copy()
    a = alpha / 2.0
    n = model.n
    keep = np.abs(y) <= a

    if model.kind == "iid_gaussian":
        return y * keep, _gaussian_trunc_second_array(sigma2, a)
    if model.kind == "iid_rademacher":
        return y * keep, sigma2 * (sigma2 <= a * a)
    if model.kind in ("example_5_1", "example_5_2"):
        al = model.alpha
        z = y * keep
        sigma2_z = _gaussian_trunc_second_array(sigma2, a)
        region = in_scaled_region(_bulk_prefix_sums(y, n - 2), al)
        tm = conditional_trunc_moments(_eta_law(al), a)
        col = n - 2
        if model.kind == "example_5_1":
            gauss_var = _gaussian_trunc_second_array(
                np.array([al * al]), a)[0]
            z[:, col] = np.where(region, z[:, col] - tm.mean, z[:, col])
            sigma2_z[:, col] = np.where(region, tm.variance, gauss_var)
        else:
            z[:, col] = np.where(region, z[:, col] - tm.mean, 0.0)
            sigma2_z[:, col] = np.where(region, tm.variance, 0.0)
        return z, sigma2_z
    # b_mixture: the first step's law given the trivial sigma-field is the
    # two-component scale mixture; later steps are Gaussians with the
    # path's own variance.
    sigma2_z = _gaussian_trunc_second_array(sigma2, a)
    mix_second = float(sum(
        0.5 * _gaussian_trunc_second_array(np.array([v / model.n]), a)[0]
        for v in (0.5, 1.5)))
    sigma2_z[:, 0] = mix_second
    return y * keep, sigma2_z


def truncate(model: MdsModel, path: MdsPath, alpha: float) -> tuple:
    """Per-path truncation; see truncate_ensemble."""
    z2, s2 = truncate_ensemble(model, path.y[None, :], path.sigma2[None, :], alpha)
    return z2[0], s2[0]


def stopping_time(sigma2_z, s_n2: float) -> int:
    """First index whose running conditional-variance total strictly exceeds
    s_n2, or n+1 when it never does."""
    cum = np.add.accumulate(np.asarray(sigma2_z, dtype=float))
    crossed = np.nonzero(cum > s_n2)[0]
    return int(crossed[0]) + 1 if crossed.size else len(cum) + 1


def _elongate_arrays(z: np.ndarray, sigma2_z: np.ndarray, s_n2: float,
                     xi_seeds: np.ndarray) -> tuple:
    n = z.shape[1]
    cum = np.add.accumulate(sigma2_z, axis=1)
    kept = cum <= s_n2
    overshoot = ~kept
    t = np.where(np.any(overshoot, axis=1),
                 np.argmax(overshoot, axis=1) + 1, n + 1)
    before = np.take_along_axis(cum, np.clip(t - 2, 0, n - 1)[:, None], axis=1)[:, 0]
    radicand = s_n2 - np.where(t >= 2, before, 0.0)
    if np.any(radicand < _RADICAND_FLOOR):
        raise MartcltError("elongation variance came out negative; "
                           "conditional variances are inconsistent with s_n2")
    radicand = np.maximum(radicand, 0.0)
    xi = _gauss(uniform_slot(xi_seeds, 0))
    y_hat = np.concatenate((z * kept, (xi * np.sqrt(radicand))[:, None]), axis=1)
    sigma2_hat = np.concatenate((sigma2_z * kept, radicand[:, None]), axis=1)
    return y_hat, sigma2_hat, t


def elongate_ensemble(model: MdsModel, y: np.ndarray, sigma2: np.ndarray,
                      alpha: float, xi_seeds) -> tuple:
    """Vectorized truncation + elongation.

    Returns (z, sigma2_z, y_hat, sigma2_hat, t_stop) with y_hat and
    sigma2_hat of width n+1 and t_stop an integer array. The tail increments
    draw xi from slot 0 of xi_seeds, an independent stream, so truncated and
    untruncated ensembles remain couple-able.
    """
    xi_seeds = np.atleast_1d(np.asarray(xi_seeds, dtype=np.uint64))
    z, sigma2_z = truncate_ensemble(model, y, sigma2, alpha)
    y_hat, sigma2_hat, t = _elongate_arrays(z, sigma2_z, model.s_n2, xi_seeds)
    return z, sigma2_z, y_hat, sigma2_hat, t


def elongate(model: MdsModel, path: MdsPath, alpha: float, xi_seed: int) -> ModifiedPath:
    """Per-path truncation + elongation with an explicit xi seed."""
    z, sigma2_z, y_hat, sigma2_hat, t = elongate_ensemble(
        model, path.y[None, :], path.sigma2[None, :], alpha,
        np.array([xi_seed], dtype=np.uint64))
    return ModifiedPath(z[0], sigma2_z[0], int(t[0]), y_hat[0], sigma2_hat[0],
                        float(alpha))
