"""Pure-Python/numpy implementations of the numeric hot kernels.

These mirror the compiled extension in ``_fast`` exactly; the package
selects one backend at import time (see ``kernels/__init__.py``).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

_LOG_2PI = math.log(2.0 * math.pi)


def profile_mean(t, w0, lam, omega, tau, gamma, r):
    """Piecewise mean log-WBC at offset t: linear decline to the nadir
    at the changepoint, then exponential recovery toward r."""
    if t < tau:
        return w0 - lam * t
    return omega + (r - omega) * (1.0 - math.exp(-gamma * (t - tau)))


def profile_mean_many(times, w0, lam, omega, tau, gamma, r):
    """Vectorized profile_mean over an array of offsets."""
    t = np.asarray(times, dtype=np.float64)
    out = np.empty_like(t)
    pre = t < tau
    out[pre] = w0 - lam * t[pre]
    post = ~pre
    out[post] = omega + (r - omega) * (1.0 - np.exp(-gamma * (t[post] - tau)))
    return out


def profile_cloud(times, w0, dose, alphas, gammas, taus, k, r):
    """Profile means for many parameter draws at once.

    Returns an (n_draws, n_times) array; row i is the mean profile under
    draw (alphas[i], gammas[i], taus[i]).
    """
    t = np.asarray(times, dtype=np.float64)[None, :]
    a = np.asarray(alphas, dtype=np.float64)[:, None]
    g = np.asarray(gammas, dtype=np.float64)[:, None]
    tau = np.asarray(taus, dtype=np.float64)[:, None]
    lam = k * dose * a
    omega = w0 - lam * tau
    pre = t < tau
    decline = w0 - lam * t
    recover = omega + (r - omega) * (1.0 - np.exp(-g * np.maximum(t - tau, 0.0)))
    return np.where(pre, decline, recover)


def normal_logpdf(x, mean, var):
    d = x - mean
    return -0.5 * (_LOG_2PI + math.log(var) + d * d / var)


def normal_logpdf_sum(x, means, var):
    x = np.asarray(x, dtype=np.float64)
    m = np.asarray(means, dtype=np.float64)
    d = x - m
    n = d.size
    return -0.5 * (n * (_LOG_2PI + math.log(var)) + float(np.dot(d, d)) / var)


def gamma_logpdf(x, shape, rate):
    if x <= 0.0:
        return -math.inf
    return shape * math.log(rate) - math.lgamma(shape) + (shape - 1.0) * math.log(x) - rate * x


def sum_sq_dev(x, means):
    d = np.asarray(x, dtype=np.float64) - np.asarray(means, dtype=np.float64)
    return float(np.dot(d, d))


def cycle_loglik_kernel(times, wbc, w0, lam, omega, tau, gamma, r, var):
    """Gaussian log-likelihood of one cycle's observations around the
    piecewise mean profile."""
    means = profile_mean_many(times, w0, lam, omega, tau, gamma, r)
    return normal_logpdf_sum(wbc, means, var)
