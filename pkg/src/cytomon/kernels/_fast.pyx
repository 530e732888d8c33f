# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric hot kernels: piecewise log-WBC profile and Gaussian /
Gamma log-density sums. Signatures mirror kernels/pure.py."""

from libc.math cimport exp, log, lgamma, INFINITY

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

cdef double _LOG_2PI = 1.8378770664093453


cdef inline double _profile_mean(double t, double w0, double lam, double omega,
                                 double tau, double gamma, double r) nogil:
    if t < tau:
        return w0 - lam * t
    return omega + (r - omega) * (1.0 - exp(-gamma * (t - tau)))


def profile_mean(double t, double w0, double lam, double omega,
                 double tau, double gamma, double r):
    return _profile_mean(t, w0, lam, omega, tau, gamma, r)


def profile_mean_many(times, double w0, double lam, double omega,
                      double tau, double gamma, double r):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _profile_mean(t[i], w0, lam, omega, tau, gamma, r)
    return out


def profile_cloud(times, double w0, double dose, alphas, gammas, taus,
                  double k, double r):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(gammas, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tau = np.ascontiguousarray(taus, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], n = t.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((m, n), dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double lam, omega
    for i in range(m):
        lam = k * dose * a[i]
        omega = w0 - lam * tau[i]
        for j in range(n):
            out[i, j] = _profile_mean(t[j], w0, lam, omega, tau[i], g[i], r)
    return out


def normal_logpdf(double x, double mean, double var):
    cdef double d = x - mean
    return -0.5 * (_LOG_2PI + log(var) + d * d / var)


def normal_logpdf_sum(x, means, double var):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mv = np.ascontiguousarray(means, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef double ss = 0.0, d
    cdef Py_ssize_t i
    for i in range(n):
        d = xv[i] - mv[i]
        ss += d * d
    return -0.5 * (n * (_LOG_2PI + log(var)) + ss / var)


def gamma_logpdf(double x, double shape, double rate):
    if x <= 0.0:
        return -INFINITY
    return shape * log(rate) - lgamma(shape) + (shape - 1.0) * log(x) - rate * x


def sum_sq_dev(x, means):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mv = np.ascontiguousarray(means, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef double ss = 0.0, d
    cdef Py_ssize_t i
    for i in range(n):
        d = xv[i] - mv[i]
        ss += d * d
    return ss


def cycle_loglik_kernel(times, wbc, double w0, double lam, double omega,
                        double tau, double gamma, double r, double var):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(wbc, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0]
    cdef double ss = 0.0, d
    cdef Py_ssize_t i
    for i in range(n):
        d = w[i] - _profile_mean(t[i], w0, lam, omega, tau, gamma, r)
        ss += d * d
    return -0.5 * (n * (_LOG_2PI + log(var)) + ss / var)
