"""Four-step monitoring pipeline: population updating, collapsing,
case-specific updating, prediction; plus trace diagnostics and sample
post-processing."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError
from .graph import ChainConfig, SampleStore, run_chain
from .rng import stream_for
from .therapy import (
    HYPER_NODE_IDS,
    RESPONSE_NODE_IDS,
    HyperPriorConfig,
    Hyperparams,
    ModelConstants,
    PatientRecord,
    build_patient_network,
    build_population_network,
)

DEFAULT_QUANTILES = (5.0, 50.0, 95.0)


# -- types ---------------------------------------------------------------


@dataclass(frozen=True)
class PopulationPosterior:
    """Retained hyperparameter draws from the population chain."""

    draws: tuple[dict, ...]
    chain: ChainConfig
    db_digest: str | None = None

    def __post_init__(self):
        if not self.draws:
            raise ConfigError("population posterior needs at least one draw")

    def column(self, key):
        return [d[key] for d in self.draws]


@dataclass(frozen=True)
class CasePrior:
    """Collapsed prior for a new case: empirical level pmfs plus the
    selected precision-prior grid point."""

    pmf_alpha: tuple[float, ...]
    pmf_gamma: tuple[float, ...]
    pmf_tau: tuple[float, ...]
    a: float
    b: float
    draw_count: int

    def __post_init__(self):
        for p, name in (
            (self.pmf_alpha, "pmf_alpha"),
            (self.pmf_gamma, "pmf_gamma"),
            (self.pmf_tau, "pmf_tau"),
        ):
            if any(x < 0 for x in p) or abs(sum(p) - 1.0) > 1e-9:
                raise ConfigError(f"{name} is not a pmf within 1e-9")

    def as_hyperparams(self) -> Hyperparams:
        return Hyperparams(self.pmf_alpha, self.pmf_gamma, self.pmf_tau, self.a, self.b)


@dataclass(frozen=True)
class CasePosterior:
    """Retained response-parameter draws for the target patient, with the
    marginal level pmfs and the data window they condition on."""

    draws: tuple[dict, ...]  # keys: alpha, gamma, tau, prec
    marginals: dict
    data_window: tuple[int, ...]
    prior: CasePrior
    last_w0: float
    seed: int

    def sigma_draws(self) -> np.ndarray:
        return 1.0 / np.sqrt(np.array([d["prec"] for d in self.draws]))


@dataclass(frozen=True)
class PlanCycle:
    cycle_index: int
    dose_std: float
    offsets: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(float(t) for t in self.offsets))
        if any(t <= 0 for t in self.offsets):
            raise ContractError("plan offsets must be > 0")
        if any(b <= a for a, b in zip(self.offsets, self.offsets[1:])):
            raise ContractError("plan offsets must be strictly increasing")
        if self.dose_std < 0:
            raise ContractError("plan dose_std must be >= 0")


@dataclass(frozen=True)
class DosePlan:
    cycles: tuple[PlanCycle, ...]

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        idx = [c.cycle_index for c in self.cycles]
        if any(b != a + 1 for a, b in zip(idx, idx[1:])):
            raise ContractError(f"plan cycle indices must be contiguous, got {idx}")


@dataclass(frozen=True)
class PredictiveCloud:
    points: tuple[tuple[int, float, float], ...]  # (cycle_index, offset, value)
    quantiles: dict  # (cycle_index, offset) -> {level: value}
    levels: tuple[float, ...]


# -- operations ----------------------------------------------------------


def population_update(
    db: list[PatientRecord],
    consts: ModelConstants,
    hyper: HyperPriorConfig,
    chain: ChainConfig,
    db_digest: str | None = None,
) -> PopulationPosterior:
    """Fit the hyperparameters to the patient database by Gibbs sampling
    with vague hyperpriors."""
    if not db:
        raise ConfigError("patient database is empty")
    net = build_population_network(db, hyper, consts)
    cfg = replace(chain, monitored=HYPER_NODE_IDS)
    store = run_chain(net, cfg)
    return PopulationPosterior(draws=store.draws, chain=cfg, db_digest=db_digest)


def _mode_ab(pop: PopulationPosterior) -> tuple[float, float]:
    """Highest-posterior-frequency (a, b) grid point; ties break toward the
    smallest pair."""
    counts = Counter((d["a"], d["b"]) for d in pop.draws)
    best = max(sorted(counts), key=lambda ab: counts[ab])
    return best


def collapse(
    pop: PopulationPosterior,
    covariates=None,
    count: int = 10_000,
    method: str = "closed_form",
    seed: int = 0,
) -> CasePrior:
    """Mix the population draws into a prior for a generic new case.

    The discrete levels make the mixture exact: the closed form averages
    the stored pmf draws; the sampled path draws ``count`` (pmf, level)
    pairs and reports empirical frequencies. Covariates are carried for
    interface compatibility; the concrete model has no covariate term.
    """
    if count < 1:
        raise ConfigError("collapse draw count must be >= 1")
    a, b = _mode_ab(pop)
    if method == "closed_form":
        pmfs = {}
        for key in ("pi_alpha", "pi_gamma", "pi_tau"):
            m = np.mean(np.array(pop.column(key), dtype=float), axis=0)
            pmfs[key] = tuple(m / m.sum())
        used = count
    elif method == "sampled":
        rng = stream_for(seed, "collapse")
        picks = rng.integers(len(pop.draws), size=count)
        pmfs = {}
        for key in ("pi_alpha", "pi_gamma", "pi_tau"):
            mat = np.array(pop.column(key), dtype=float)
            rows = mat[picks]
            cum = np.cumsum(rows / rows.sum(axis=1, keepdims=True), axis=1)
            idx = (cum < rng.random(count)[:, None]).sum(axis=1)
            freq = np.bincount(idx, minlength=mat.shape[1]).astype(float)
            pmfs[key] = tuple(freq / count)
        used = count
    else:
        raise ConfigError(f"unknown collapse method {method!r}")
    return CasePrior(pmfs["pi_alpha"], pmfs["pi_gamma"], pmfs["pi_tau"], a, b, used)


def record_prefix(record: PatientRecord, n_cycles: int) -> PatientRecord:
    """First n_cycles cycles of a record (the growing data window of the
    sequential updating procedure)."""
    return PatientRecord(record.patient_id, record.cycles[:n_cycles], record.covariates)


def _empirical_pmf(values, grid) -> tuple[float, ...]:
    freq = np.zeros(len(grid))
    for v in values:
        for i, g in enumerate(grid):
            if math.isclose(v, g, rel_tol=0, abs_tol=1e-12):
                freq[i] += 1
                break
    return tuple(freq / max(len(values), 1))


def case_update(
    prior: CasePrior,
    record: PatientRecord,
    consts: ModelConstants,
    chain: ChainConfig,
) -> CasePosterior:
    """Posterior for the target patient given the collapsed prior and the
    observations in ``record``. With no observations the prior is returned
    as the posterior."""
    n_obs = sum(len(c.times) for c in record.cycles)
    window = tuple(c.cycle_index for c in record.cycles if c.times)
    last_w0 = record.cycles[-1].w0 if record.cycles else consts.r
    if n_obs == 0:
        marginals = {
            "alpha": prior.pmf_alpha,
            "gamma": prior.pmf_gamma,
            "tau": prior.pmf_tau,
        }
        return CasePosterior((), marginals, window, prior, last_w0, chain.seed)
    net = build_patient_network(record, prior.as_hyperparams(), consts)
    cfg = replace(chain, monitored=RESPONSE_NODE_IDS)
    store = run_chain(net, cfg)
    marginals = {
        "alpha": _empirical_pmf(store.column("alpha"), consts.alpha_grid),
        "gamma": _empirical_pmf(store.column("gamma"), consts.gamma_grid),
        "tau": _empirical_pmf(store.column("tau"), consts.tau_grid),
    }
    return CasePosterior(store.draws, marginals, window, prior, last_w0, cfg.seed)


def predict(
    post: CasePosterior,
    plan: DosePlan,
    consts: ModelConstants,
    w0_policy: str = "last_observed",
    seed: int = 0,
    noise: bool = True,
    levels: tuple[float, ...] = DEFAULT_QUANTILES,
) -> PredictiveCloud:
    """Propagate every retained parameter draw through the response model
    for each planned cycle, optionally adding observation noise."""
    if not post.draws:
        raise ContractError("posterior has no draws to predict from")
    if not plan.cycles:
        raise ContractError("dose plan is empty")
    first_future = (max(post.data_window) if post.data_window else 0) + 1
    if plan.cycles[0].cycle_index != first_future:
        raise ContractError(
            f"plan must start at cycle {first_future}, got {plan.cycles[0].cycle_index}"
        )
    if w0_policy == "last_observed":
        w0 = post.last_w0
    elif w0_policy == "normal":
        w0 = consts.r
    else:
        raise ConfigError(f"unknown w0 policy {w0_policy!r}")

    alphas = np.array([d["alpha"] for d in post.draws])
    gammas = np.array([d["gamma"] for d in post.draws])
    taus = np.array([d["tau"] for d in post.draws])
    sigmas = post.sigma_draws()
    rng = stream_for(seed, "predict")

    points: list[tuple[int, float, float]] = []
    quantiles: dict = {}
    for pc in plan.cycles:
        if not pc.offsets:
            continue
        values = kernels.profile_cloud(
            np.array(pc.offsets), w0, pc.dose_std, alphas, gammas, taus, consts.k, consts.r
        )
        if noise:
            values = values + rng.standard_normal(values.shape) * sigmas[:, None]
        for row in values:
            for t, v in zip(pc.offsets, row):
                points.append((pc.cycle_index, float(t), float(v)))
        for col, t in enumerate(pc.offsets):
            qs = np.percentile(values[:, col], levels)
            quantiles[(pc.cycle_index, float(t))] = {
                float(lv): float(q) for lv, q in zip(levels, qs)
            }
    return PredictiveCloud(tuple(points), quantiles, tuple(float(lv) for lv in levels))


# -- diagnostics and post-processing ------------------------------------


@dataclass(frozen=True)
class NodeDiagnostics:
    trace: tuple[float, ...]
    running_mean: tuple[float, ...]
    autocorr: dict  # lag -> value, or None when undefined (constant trace)
    stationary: bool


@dataclass(frozen=True)
class DiagnosticsReport:
    available: bool
    nodes: dict = field(default_factory=dict)
    reason: str | None = None

    @property
    def stationary(self) -> bool:
        return self.available and all(n.stationary for n in self.nodes.values())


def _scalar_columns(store: SampleStore) -> dict:
    cols: dict = {}
    for node_id in store.node_ids:
        first = store.draws[0][node_id]
        if isinstance(first, tuple):
            for i in range(len(first)):
                cols[f"{node_id}[{i}]"] = np.array([d[node_id][i] for d in store.draws])
        else:
            cols[node_id] = np.array([d[node_id] for d in store.draws])
    return cols


def trace_diagnostics(store: SampleStore, max_lag: int = 20) -> DiagnosticsReport:
    """Per-node trace summary with lag-k autocorrelations and a half-mean
    stationarity heuristic: halves differing by < 0.1 pooled standard
    deviations count as stationary."""
    if store.retained < 2:
        return DiagnosticsReport(available=False, reason="need at least 2 retained draws")
    nodes = {}
    for name, x in _scalar_columns(store).items():
        n = len(x)
        running = np.cumsum(x) / np.arange(1, n + 1)
        var = float(np.var(x))
        ac: dict = {}
        for lag in range(1, min(max_lag, n - 1) + 1):
            if var == 0.0:
                ac[lag] = None
            else:
                a, b = x[:-lag], x[lag:]
                sa, sb = float(np.std(a)), float(np.std(b))
                if sa == 0.0 or sb == 0.0:
                    ac[lag] = None
                else:
                    ac[lag] = float(np.corrcoef(a, b)[0, 1])
        half = n // 2
        m1, m2 = float(np.mean(x[:half])), float(np.mean(x[half:]))
        pooled = math.sqrt(0.5 * (float(np.var(x[:half])) + float(np.var(x[half:]))))
        stationary = True if pooled == 0.0 else abs(m1 - m2) < 0.1 * pooled
        nodes[name] = NodeDiagnostics(
            trace=tuple(float(v) for v in x),
            running_mean=tuple(float(v) for v in running),
            autocorr=ac,
            stationary=stationary,
        )
    return DiagnosticsReport(available=True, nodes=nodes)


def thin(store: SampleStore, burn_in: int, stride: int) -> SampleStore:
    """Post-hoc burn-in and thinning of an existing store. Counting draws
    from 1, draw d is kept when d > burn_in and (d - burn_in) is a multiple
    of stride."""
    if stride < 1:
        raise ConfigError("stride must be >= 1")
    if burn_in < 0:
        raise ConfigError("burn_in must be >= 0")
    kept = tuple(
        d
        for i, d in enumerate(store.draws, start=1)
        if i > burn_in and (i - burn_in) % stride == 0
    )
    return SampleStore(
        node_ids=store.node_ids,
        draws=kept,
        burn_in=burn_in,
        thin=stride,
        rng_seed=store.rng_seed,
        sweep_count=len(store.draws),
        digest=store.digest,
    )
