"""Both kernel backends agree with each other and with reference math."""

import math

import numpy as np
import pytest

from cytomon.kernels import pure
from oracles import normal_logpdf_ref, piecewise_mean_ref

try:
    from cytomon.kernels import _fast

    BACKENDS = [pure, _fast]
except ImportError:
    BACKENDS = [pure]


@pytest.fixture(params=BACKENDS, ids=lambda b: b.BACKEND)
def kern(request):
    return request.param


def test_profile_mean_matches_reference(kern):
    rng = np.random.default_rng(1)
    for _ in range(200):
        w0, dose, alpha = rng.uniform(5, 9), rng.uniform(0, 20), rng.uniform(1, 2)
        gamma, tau = rng.uniform(0.05, 0.5), rng.uniform(4, 12)
        k, r = 0.05, 8.0
        t = rng.uniform(0.1, 30)
        lam = k * dose * alpha
        omega = w0 - lam * tau
        got = kern.profile_mean(t, w0, lam, omega, tau, gamma, r)
        ref = piecewise_mean_ref(t, w0, dose, alpha, gamma, tau, k, r)
        assert got == pytest.approx(ref, abs=1e-12)


def test_profile_mean_many_matches_scalar(kern):
    ts = np.linspace(0.5, 25, 40)
    out = kern.profile_mean_many(ts, 8.0, 0.75, 2.0, 8.0, 0.2, 8.0)
    for t, v in zip(ts, out):
        assert v == pytest.approx(kern.profile_mean(t, 8.0, 0.75, 2.0, 8.0, 0.2, 8.0))


def test_profile_cloud_matches_scalar(kern):
    ts = np.array([2.0, 6.0, 11.0, 18.0])
    alphas = np.array([1.0, 1.5, 2.0])
    gammas = np.array([0.1, 0.2, 0.4])
    taus = np.array([6.0, 8.0, 10.0])
    out = kern.profile_cloud(ts, 8.0, 10.0, alphas, gammas, taus, 0.05, 8.0)
    assert out.shape == (3, 4)
    for i in range(3):
        lam = 0.05 * 10.0 * alphas[i]
        omega = 8.0 - lam * taus[i]
        for j, t in enumerate(ts):
            assert out[i, j] == pytest.approx(
                kern.profile_mean(t, 8.0, lam, omega, taus[i], gammas[i], 8.0)
            )


def test_normal_logpdf(kern):
    assert kern.normal_logpdf(1.3, 0.7, 2.1) == pytest.approx(
        normal_logpdf_ref(1.3, 0.7, 2.1), abs=1e-12
    )


def test_normal_logpdf_sum(kern):
    x = np.array([1.0, 2.0, 3.5])
    m = np.array([0.5, 2.2, 3.0])
    ref = sum(normal_logpdf_ref(a, b, 0.49) for a, b in zip(x, m))
    assert kern.normal_logpdf_sum(x, m, 0.49) == pytest.approx(ref, abs=1e-12)


def test_gamma_logpdf(kern):
    # Gamma(2, 3) at x=0.5: 3^2 * x * exp(-3x) / Gamma(2)
    ref = math.log(9 * 0.5 * math.exp(-1.5))
    assert kern.gamma_logpdf(0.5, 2.0, 3.0) == pytest.approx(ref, abs=1e-12)
    assert kern.gamma_logpdf(-1.0, 2.0, 3.0) == -math.inf


def test_backends_agree_on_cycle_loglik():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend unavailable")
    ts = np.array([2.0, 4.0, 6.0, 9.0, 13.0])
    ws = np.array([7.0, 6.1, 4.9, 3.2, 4.4])
    args = (ts, ws, 8.0, 0.75, 2.0, 8.0, 0.2, 8.0, 0.09)
    assert BACKENDS[0].cycle_loglik_kernel(*args) == pytest.approx(
        BACKENDS[1].cycle_loglik_kernel(*args), abs=1e-10
    )
