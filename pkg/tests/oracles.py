"""Independent verification oracles used across the test suite.

Everything here is deliberately implemented from first principles (direct
enumeration, textbook conjugate algebra, pointwise density sums) and never
calls the code paths it checks.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def normal_logpdf_ref(x, mean, var):
    return -0.5 * (math.log(2 * math.pi * var) + (x - mean) ** 2 / var)


def piecewise_mean_ref(t, w0, dose, alpha, gamma, tau, k, r):
    lam = k * dose * alpha
    omega = w0 - lam * tau
    if t < tau:
        return w0 - lam * t
    return omega + (r - omega) * (1.0 - math.exp(-gamma * (t - tau)))


def normal_normal_posterior(m0, v0, obs, v):
    """Posterior mean/variance of a Normal mean with known-variance Normal
    observations."""
    prec = 1.0 / v0 + len(obs) / v
    mean = (m0 / v0 + sum(obs) / v) / prec
    return mean, 1.0 / prec


def cell_log_marginal(ss, n, a, b):
    """Log marginal likelihood of n Gaussian residuals with summed squares
    ss, precision integrated against Gamma(a, b)."""
    return (
        -0.5 * n * math.log(2 * math.pi)
        + a * math.log(b)
        + math.lgamma(a + 0.5 * n)
        - math.lgamma(a)
        - (a + 0.5 * n) * math.log(b + 0.5 * ss)
    )


def enumerate_case_posterior(record, pmf_alpha, pmf_gamma, pmf_tau, a, b, k, r, grids):
    """Brute-force posterior over all (alpha, gamma, tau) cells with the
    precision handled by its analytic conjugate marginal per cell.

    Returns (marginal pmf over alpha grid, over gamma grid, over tau grid).
    """
    alpha_grid, gamma_grid, tau_grid = grids
    logps = np.full((len(alpha_grid), len(gamma_grid), len(tau_grid)), -np.inf)
    for (ia, alpha), (ig, gamma), (it, tau) in itertools.product(
        enumerate(alpha_grid), enumerate(gamma_grid), enumerate(tau_grid)
    ):
        if pmf_alpha[ia] == 0 or pmf_gamma[ig] == 0 or pmf_tau[it] == 0:
            continue
        ss = 0.0
        n = 0
        for cyc in record.cycles:
            for t, w in zip(cyc.times, cyc.wbc_log):
                mu = piecewise_mean_ref(t, cyc.w0, cyc.dose_std, alpha, gamma, tau, k, r)
                ss += (w - mu) ** 2
                n += 1
        logps[ia, ig, it] = (
            math.log(pmf_alpha[ia])
            + math.log(pmf_gamma[ig])
            + math.log(pmf_tau[it])
            + cell_log_marginal(ss, n, a, b)
        )
    p = np.exp(logps - logps.max())
    p /= p.sum()
    return p.sum(axis=(1, 2)), p.sum(axis=(0, 2)), p.sum(axis=(0, 1))


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
