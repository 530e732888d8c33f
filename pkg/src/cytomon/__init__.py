"""Hierarchical Bayesian therapy monitoring.

Gibbs sampling over layered Bayesian networks: learn population response
distributions from a patient database, individualize them to a target
patient cycle by cycle, and simulate predictive log-WBC trajectories under
hypothesized dose plans.
"""

from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
__all__ = ["KERNEL_BACKEND", "__version__"]
