"""Domain types for the chemotherapy toxicity model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import DataError, StructuralError

# Default grids. The sensitivity levels 1 / 1.5 / 2 (normal / sensitive /
# very sensitive) are fixed by the model; the recovery-rate and
# changepoint grids and the k, r constants have no published values and
# are configuration defaults only.
DEFAULT_ALPHA_GRID = (1.0, 1.5, 2.0)
DEFAULT_GAMMA_GRID = (0.1, 0.2, 0.4)  # per day
DEFAULT_TAU_GRID = (6.0, 8.0, 10.0)  # days
DEFAULT_K = 0.05
DEFAULT_R = 8.0


@dataclass(frozen=True)
class CycleObservation:
    """One treatment cycle: dose context plus the log-WBC measurements."""

    cycle_index: int
    dose_std: float
    t0: float
    w0: float
    times: tuple[float, ...]
    wbc_log: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "wbc_log", tuple(float(w) for w in self.wbc_log))
        if len(self.times) != len(self.wbc_log):
            raise DataError(f"cycle {self.cycle_index}: times and wbc_log length mismatch")
        if any(t <= 0 for t in self.times):
            raise DataError(f"cycle {self.cycle_index}: offsets must be > 0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise DataError(f"cycle {self.cycle_index}: offsets must be strictly increasing")
        if self.dose_std < 0:
            raise DataError(f"cycle {self.cycle_index}: dose_std must be >= 0")
        if not all(math.isfinite(w) for w in self.wbc_log) or not math.isfinite(self.w0):
            raise DataError(f"cycle {self.cycle_index}: non-finite log-WBC value")


@dataclass(frozen=True)
class PatientRecord:
    patient_id: str
    cycles: tuple[CycleObservation, ...]
    covariates: tuple[tuple[str, float], ...] = ()  # carried, unused by this model

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        idx = [c.cycle_index for c in self.cycles]
        if idx != list(range(1, len(idx) + 1)):
            raise DataError(
                f"patient {self.patient_id}: cycle indices must be contiguous from 1, got {idx}"
            )


@dataclass(frozen=True)
class ModelConstants:
    """k: expected log-WBC fall per unit time per unit dose for a normal
    patient; r: normal log-WBC count; plus the three level grids."""

    k: float = DEFAULT_K
    r: float = DEFAULT_R
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    gamma_grid: tuple[float, ...] = DEFAULT_GAMMA_GRID
    tau_grid: tuple[float, ...] = DEFAULT_TAU_GRID

    def __post_init__(self):
        if self.k <= 0:
            raise StructuralError("k must be > 0")
        for name in ("alpha_grid", "gamma_grid", "tau_grid"):
            g = getattr(self, name)
            if not g or any(b <= a for a, b in zip(g, g[1:])):
                raise StructuralError(f"{name} must be nonempty and strictly increasing")


@dataclass(frozen=True)
class ResponseParams:
    """Per-patient response vector: sensitivity, recovery rate,
    changepoint, noise scale."""

    alpha: float
    gamma: float
    tau: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise StructuralError("sigma must be > 0")

    def validate_grids(self, consts: ModelConstants) -> None:
        for value, grid, name in (
            (self.alpha, consts.alpha_grid, "alpha"),
            (self.gamma, consts.gamma_grid, "gamma"),
            (self.tau, consts.tau_grid, "tau"),
        ):
            if not any(math.isclose(value, g, rel_tol=0, abs_tol=1e-12) for g in grid):
                raise StructuralError(f"{name}={value} is not on its grid {grid}")


def _check_simplex(p, name):
    if any(x < 0 for x in p) or abs(sum(p) - 1.0) > 1e-12:
        raise StructuralError(f"{name} must be a pmf (nonnegative, sum 1 within 1e-12)")


@dataclass(frozen=True)
class Hyperparams:
    """Population-level parameters: level pmfs plus Gamma prior (a, b) for
    the precision."""

    pi_alpha: tuple[float, float, float]
    pi_gamma: tuple[float, float, float]
    pi_tau: tuple[float, float, float]
    a: float
    b: float
    beta: tuple[float, ...] = ()  # covariate effects, carried but unused

    def __post_init__(self):
        for p, name in ((self.pi_alpha, "pi_alpha"), (self.pi_gamma, "pi_gamma"), (self.pi_tau, "pi_tau")):
            _check_simplex(p, name)
        if self.a <= 0 or self.b <= 0:
            raise StructuralError("a and b must be > 0")


@dataclass(frozen=True)
class HyperPriorConfig:
    """Vague hyperpriors: symmetric Dirichlet for each level pmf and a
    finite grid with a uniform prior for each of (a, b)."""

    dirichlet_conc: tuple[float, float, float] = (1.0, 1.0, 1.0)
    a_grid: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
    b_grid: tuple[float, ...] = (0.05, 0.2, 0.8, 3.2)

    def __post_init__(self):
        for name in ("a_grid", "b_grid"):
            g = getattr(self, name)
            if not g or any(b <= a for a, b in zip(g, g[1:])):
                raise StructuralError(f"{name} must be nonempty and strictly increasing")
        if any(c <= 0 for c in self.dirichlet_conc):
            raise StructuralError("dirichlet_conc must be positive")
