"""Log-WBC profile mathematics: piecewise mean curve, nadir, and the
Gaussian cycle log-likelihood."""

from __future__ import annotations

import numpy as np

from .. import kernels
from .types import CycleObservation, ModelConstants, ResponseParams


def decline_rate(cycle: CycleObservation, params: ResponseParams, consts: ModelConstants) -> float:
    """Downward slope of the log-WBC count before the changepoint."""
    return consts.k * cycle.dose_std * params.alpha


def nadir(cycle: CycleObservation, params: ResponseParams, consts: ModelConstants) -> float:
    """Minimum mean log-WBC reached during the cycle (at the changepoint)."""
    return cycle.w0 - decline_rate(cycle, params, consts) * params.tau


def mean_log_wbc(
    t: float, cycle: CycleObservation, params: ResponseParams, consts: ModelConstants
) -> float:
    """Mean log-WBC at offset t (days after administration): linear decline
    until the changepoint, exponential recovery toward the normal count
    afterwards. Continuous at t = tau."""
    lam = decline_rate(cycle, params, consts)
    omega = cycle.w0 - lam * params.tau
    return kernels.profile_mean(t, cycle.w0, lam, omega, params.tau, params.gamma, consts.r)


def mean_profile(
    times, cycle: CycleObservation, params: ResponseParams, consts: ModelConstants
) -> np.ndarray:
    lam = decline_rate(cycle, params, consts)
    omega = cycle.w0 - lam * params.tau
    return kernels.profile_mean_many(times, cycle.w0, lam, omega, params.tau, params.gamma, consts.r)


def cycle_loglik(
    cycle: CycleObservation, params: ResponseParams, consts: ModelConstants
) -> float:
    """Sum of Normal log-densities of the cycle's observations around the
    mean profile; observations are conditionally independent given params."""
    if not cycle.times:
        return 0.0
    lam = decline_rate(cycle, params, consts)
    omega = cycle.w0 - lam * params.tau
    return kernels.cycle_loglik_kernel(
        np.asarray(cycle.times),
        np.asarray(cycle.wbc_log),
        cycle.w0,
        lam,
        omega,
        params.tau,
        params.gamma,
        consts.r,
        params.sigma**2,
    )
