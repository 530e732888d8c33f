"""Distribution specifications for network nodes.

A parameter slot is bound to a constant, to a parent node (``Ref``), or to
a named function of parents and constants (``Computed``). The last form is
needed for observation nodes whose Normal mean is a piecewise function of
several parents; functions are looked up in the slot-function registry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .. import kernels
from ..errors import StructuralError

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class Ref:
    """Binding to the current value of a parent node."""

    node_id: str


@dataclass(frozen=True)
class Computed:
    """Binding to slot_fn(**args, **consts) with args resolved from parents."""

    fn: str
    args: tuple[tuple[str, "Binding"], ...]
    consts: tuple[tuple[str, float], ...] = ()


Binding = Union[float, int, tuple, np.ndarray, Ref, Computed]

_slot_fns: dict[str, Callable] = {}


def register_slot_fn(name: str, fn: Callable) -> None:
    _slot_fns[name] = fn


def binding_refs(b: Binding) -> list[str]:
    """Node ids a binding depends on."""
    if isinstance(b, Ref):
        return [b.node_id]
    if isinstance(b, Computed):
        out: list[str] = []
        for _, a in b.args:
            out.extend(binding_refs(a))
        return out
    return []


def resolve(b: Binding, lookup: Callable[[str], object]):
    if isinstance(b, Ref):
        return lookup(b.node_id)
    if isinstance(b, Computed):
        fn = _slot_fns.get(b.fn)
        if fn is None:
            raise StructuralError(f"unknown slot function {b.fn!r}")
        kwargs = {name: resolve(a, lookup) for name, a in b.args}
        kwargs.update(b.consts)
        return fn(**kwargs)
    return b


def _check_pmf(pmf, what: str) -> None:
    p = np.asarray(pmf, dtype=float)
    if np.any(p < 0) or abs(float(p.sum()) - 1.0) > SIMPLEX_TOL:
        raise StructuralError(f"{what} is not a pmf (nonnegative, sum 1 within {SIMPLEX_TOL})")


def _check_grid(grid, what: str) -> None:
    g = list(grid)
    if not g or any(b <= a for a, b in zip(g, g[1:])):
        raise StructuralError(f"{what} must be nonempty and strictly increasing")


class Dist:
    """Base distribution spec: log-density, prior sampling, support."""

    def param_bindings(self) -> list[Binding]:
        raise NotImplementedError

    def logpdf(self, value, lookup) -> float:
        raise NotImplementedError

    def sample(self, lookup, rng) -> object:
        raise NotImplementedError

    def in_support(self, value, lookup) -> bool:
        return True

    def candidates(self, lookup):
        """Enumerable support, or None for continuous families."""
        return None


@dataclass
class Normal(Dist):
    """Normal with either a variance or a precision slot bound."""

    mean: Binding
    variance: Binding | None = None
    precision: Binding | None = None

    def __post_init__(self):
        if (self.variance is None) == (self.precision is None):
            raise StructuralError("Normal needs exactly one of variance/precision")
        for slot in (self.variance, self.precision):
            if isinstance(slot, (int, float)) and slot <= 0:
                raise StructuralError("Normal variance/precision must be > 0")

    def param_bindings(self):
        scale = self.variance if self.variance is not None else self.precision
        return [self.mean, scale]

    def _var(self, lookup) -> float:
        if self.variance is not None:
            return float(resolve(self.variance, lookup))
        return 1.0 / float(resolve(self.precision, lookup))

    def logpdf(self, value, lookup):
        return kernels.normal_logpdf(float(value), float(resolve(self.mean, lookup)), self._var(lookup))

    def sample(self, lookup, rng):
        return float(resolve(self.mean, lookup)) + math.sqrt(self._var(lookup)) * rng.standard_normal()


@dataclass
class Gamma(Dist):
    shape: Binding
    rate: Binding

    def __post_init__(self):
        for slot in (self.shape, self.rate):
            if isinstance(slot, (int, float)) and slot <= 0:
                raise StructuralError("Gamma shape and rate must be > 0")

    def param_bindings(self):
        return [self.shape, self.rate]

    def logpdf(self, value, lookup):
        return kernels.gamma_logpdf(
            float(value), float(resolve(self.shape, lookup)), float(resolve(self.rate, lookup))
        )

    def sample(self, lookup, rng):
        return float(
            rng.gamma(float(resolve(self.shape, lookup)), 1.0 / float(resolve(self.rate, lookup)))
        )

    def in_support(self, value, lookup):
        return value > 0


@dataclass
class Categorical(Dist):
    """Discrete over an explicit level grid; value is the level itself."""

    levels: tuple
    pmf: Binding

    def __post_init__(self):
        _check_grid(self.levels, "Categorical levels")
        self.levels = tuple(float(v) for v in self.levels)
        if isinstance(self.pmf, (list, tuple, np.ndarray)):
            self.pmf = tuple(float(p) for p in self.pmf)
            if len(self.pmf) != len(self.levels):
                raise StructuralError("pmf length mismatch with levels")
            _check_pmf(self.pmf, "Categorical pmf")

    def param_bindings(self):
        return [self.pmf]

    def level_index(self, value) -> int:
        for i, lv in enumerate(self.levels):
            if math.isclose(lv, value, rel_tol=0, abs_tol=1e-12):
                return i
        raise ValueError(f"value {value} not on level grid {self.levels}")

    def logpdf(self, value, lookup):
        p = np.asarray(resolve(self.pmf, lookup), dtype=float)
        pi = p[self.level_index(value)]
        return math.log(pi) if pi > 0 else -math.inf

    def sample(self, lookup, rng):
        p = np.asarray(resolve(self.pmf, lookup), dtype=float)
        return float(self.levels[rng.choice(len(self.levels), p=p / p.sum())])

    def in_support(self, value, lookup):
        try:
            self.level_index(value)
            return True
        except ValueError:
            return False

    def candidates(self, lookup):
        return self.levels


@dataclass
class Dirichlet(Dist):
    concentration: tuple

    def __post_init__(self):
        self.concentration = tuple(float(c) for c in self.concentration)
        if not self.concentration or any(c <= 0 for c in self.concentration):
            raise StructuralError("Dirichlet concentration must be positive")

    def param_bindings(self):
        return []

    def logpdf(self, value, lookup):
        x = np.asarray(value, dtype=float)
        c = np.asarray(self.concentration)
        if x.shape != c.shape or np.any(x <= 0) or abs(float(x.sum()) - 1.0) > 1e-9:
            return -math.inf
        logB = float(np.sum([math.lgamma(ci) for ci in c])) - math.lgamma(float(c.sum()))
        return float(np.dot(c - 1.0, np.log(x))) - logB

    def sample(self, lookup, rng):
        return rng.dirichlet(self.concentration)

    def in_support(self, value, lookup):
        x = np.asarray(value, dtype=float)
        return (
            x.shape == (len(self.concentration),)
            and bool(np.all(x >= 0))
            and abs(float(x.sum()) - 1.0) <= 1e-9
        )


@dataclass
class UniformInterval(Dist):
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise StructuralError("UniformInterval requires lo < hi")

    def param_bindings(self):
        return []

    def logpdf(self, value, lookup):
        if self.lo <= value <= self.hi:
            return -math.log(self.hi - self.lo)
        return -math.inf

    def sample(self, lookup, rng):
        return float(rng.uniform(self.lo, self.hi))

    def in_support(self, value, lookup):
        return self.lo <= value <= self.hi


@dataclass
class DiscreteUniformGrid(Dist):
    grid: tuple

    def __post_init__(self):
        _check_grid(self.grid, "DiscreteUniformGrid grid")
        self.grid = tuple(float(v) for v in self.grid)

    def param_bindings(self):
        return []

    def _index(self, value):
        for i, g in enumerate(self.grid):
            if math.isclose(g, value, rel_tol=0, abs_tol=1e-12):
                return i
        return None

    def logpdf(self, value, lookup):
        if self._index(value) is None:
            return -math.inf
        return -math.log(len(self.grid))

    def sample(self, lookup, rng):
        return float(self.grid[rng.integers(len(self.grid))])

    def in_support(self, value, lookup):
        return self._index(value) is not None

    def candidates(self, lookup):
        return self.grid
