"""Numeric kernel backend selection.

The compiled extension (``cytomon.kernels._fast``) is preferred; the pure
numpy implementation is used when the extension is unavailable or when
``CYTOMON_PURE_PYTHON=1`` is set. ``BACKEND`` reports which one is active.
"""

from __future__ import annotations

import os

if os.environ.get("CYTOMON_PURE_PYTHON") == "1":
    from . import pure as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _impl

BACKEND = _impl.BACKEND

profile_mean = _impl.profile_mean
profile_mean_many = _impl.profile_mean_many
profile_cloud = _impl.profile_cloud
normal_logpdf = _impl.normal_logpdf
normal_logpdf_sum = _impl.normal_logpdf_sum
gamma_logpdf = _impl.gamma_logpdf
sum_sq_dev = _impl.sum_sq_dev
cycle_loglik_kernel = _impl.cycle_loglik_kernel

__all__ = [
    "BACKEND",
    "profile_mean",
    "profile_mean_many",
    "profile_cloud",
    "normal_logpdf",
    "normal_logpdf_sum",
    "gamma_logpdf",
    "sum_sq_dev",
    "cycle_loglik_kernel",
]
