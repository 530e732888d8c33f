"""Gibbs sampling over a network: full-conditional evaluation, exact
full-conditional samplers, sweeps, and chain execution.

Supported full conditionals (each exact): enumeration for discrete-grid
nodes, Dirichlet posteriors for categorical children, Gamma posteriors for
the precision of Normal children, Normal-mean posteriors for Normal
children, and prior sampling for childless nodes. Anything else raises
CapabilityError naming the node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import CapabilityError, ConfigError, ContractError
from ..rng import StreamRegistry
from .dists import (
    Categorical,
    DiscreteUniformGrid,
    Dirichlet,
    Gamma,
    Normal,
    Ref,
    UniformInterval,
    resolve,
)
from .network import DETERMINISTIC, STOCHASTIC, Network


def _det_descendants(net: Network, node_id: str) -> list[str]:
    cache = getattr(net, "_det_desc_cache", None)
    if cache is None:
        cache = {}
        net._det_desc_cache = cache  # type: ignore[attr-defined]
    if node_id not in cache:
        cache[node_id] = net.det_descendants(node_id)
    return cache[node_id]


def _refresh_after(net: Network, node_id: str) -> None:
    for d in _det_descendants(net, node_id):
        n = net.nodes[d]
        n.value = resolve(n.det, net.value)


def full_conditional_logpdf(net: Network, node_id: str, candidate) -> float:
    """Unnormalized log full conditional: prior term plus the likelihood
    terms of the node's children in the spliced skeleton."""
    node = net.nodes.get(node_id)
    if node is None or node.kind != STOCHASTIC:
        raise ContractError(f"full conditional requires a stochastic node, got {node_id!r}")
    if not node.dist.in_support(candidate, net.value):
        return -math.inf
    old = node.value
    node.value = candidate
    _refresh_after(net, node_id)
    try:
        logp = node.dist.logpdf(candidate, net.value)
        for c in net.children_in_skeleton(node_id):
            cn = net.nodes[c]
            logp += cn.dist.logpdf(cn.value, net.value)
            if logp == -math.inf:
                break
        return logp
    finally:
        node.value = old
        _refresh_after(net, node_id)


def _enumerate_pmf(net: Network, node_id: str, candidates) -> np.ndarray:
    logps = np.array([full_conditional_logpdf(net, node_id, v) for v in candidates])
    m = logps.max()
    if m == -math.inf:
        raise CapabilityError(f"node {node_id}: all candidates have zero posterior mass")
    p = np.exp(logps - m)
    return p / p.sum()


def sample_full_conditional(net: Network, node_id: str, rng) -> object:
    """Exact draw from the full conditional of node_id."""
    node = net.nodes.get(node_id)
    if node is None or node.kind != STOCHASTIC:
        raise ContractError(f"cannot resample {node_id!r}: not a stochastic node")
    dist = node.dist

    cands = dist.candidates(net.value)
    if cands is not None:
        pmf = _enumerate_pmf(net, node_id, cands)
        return float(cands[rng.choice(len(cands), p=pmf)])

    children = net.children_in_skeleton(node_id)
    if not children:
        return dist.sample(net.value, rng)

    if isinstance(dist, Dirichlet):
        conc = np.array(dist.concentration, dtype=float)
        for c in children:
            cd = net.nodes[c].dist
            if not (isinstance(cd, Categorical) and cd.pmf == Ref(node_id)):
                raise CapabilityError(
                    f"node {node_id}: Dirichlet sampler needs categorical children, "
                    f"child {c} does not qualify"
                )
            conc[cd.level_index(net.nodes[c].value)] += 1.0
        return rng.dirichlet(conc)

    if isinstance(dist, Gamma):
        shape = float(resolve(dist.shape, net.value))
        rate = float(resolve(dist.rate, net.value))
        n = 0
        ss = 0.0
        for c in children:
            cd = net.nodes[c].dist
            if not (isinstance(cd, Normal) and cd.precision == Ref(node_id)):
                raise CapabilityError(
                    f"node {node_id}: Gamma sampler needs Normal children with this "
                    f"precision, child {c} does not qualify"
                )
            d = float(net.nodes[c].value) - float(resolve(cd.mean, net.value))
            ss += d * d
            n += 1
        return float(rng.gamma(shape + 0.5 * n, 1.0 / (rate + 0.5 * ss)))

    if isinstance(dist, Normal):
        m0 = float(resolve(dist.mean, net.value))
        v0 = dist._var(net.value)
        prec = 1.0 / v0
        num = m0 / v0
        for c in children:
            cd = net.nodes[c].dist
            if not (isinstance(cd, Normal) and cd.mean == Ref(node_id)):
                raise CapabilityError(
                    f"node {node_id}: Normal-mean sampler needs Normal children with "
                    f"this mean, child {c} does not qualify"
                )
            vc = cd._var(net.value)
            prec += 1.0 / vc
            num += float(net.nodes[c].value) / vc
        return num / prec + math.sqrt(1.0 / prec) * rng.standard_normal()

    raise CapabilityError(
        f"node {node_id}: no exact full-conditional sampler for "
        f"{type(dist).__name__} with children"
    )


def initialize(net: Network) -> None:
    """Deterministic support-interior starting state: discrete nodes at the
    middle grid point, Gamma at the prior mean, Dirichlet uniform, Normal
    at the prior mean, uniform intervals at the midpoint."""
    for node_id in net.unobserved_stochastic():
        node = net.nodes[node_id]
        d = node.dist
        if isinstance(d, (Categorical, DiscreteUniformGrid)):
            g = d.candidates(net.value)
            node.value = float(g[len(g) // 2])
        elif isinstance(d, Gamma):
            node.value = float(resolve(d.shape, net.value)) / float(resolve(d.rate, net.value))
        elif isinstance(d, Dirichlet):
            k = len(d.concentration)
            node.value = np.full(k, 1.0 / k)
        elif isinstance(d, Normal):
            node.value = float(resolve(d.mean, net.value))
        elif isinstance(d, UniformInterval):
            node.value = 0.5 * (d.lo + d.hi)
        else:
            raise CapabilityError(f"node {node_id}: no initializer for {type(d).__name__}")
    net.refresh_deterministic()


def gibbs_sweep(net: Network, streams: StreamRegistry) -> Network:
    """One sweep: resample every unobserved stochastic node in topological
    order (ties by id), refreshing deterministic nodes after each draw."""
    for node_id in net.unobserved_stochastic():
        value = sample_full_conditional(net, node_id, streams.get(node_id))
        net.set_value(node_id, value)
        _refresh_after(net, node_id)
    return net


@dataclass(frozen=True)
class ChainConfig:
    sweeps: int = 500
    burn_in: int = 100
    thin: int = 5
    seed: int = 0
    monitored: tuple[str, ...] = ()

    def __post_init__(self):
        if self.sweeps < 0 or self.burn_in < 0:
            raise ConfigError("sweeps and burn_in must be >= 0")
        if self.thin < 1:
            raise ConfigError("thin must be >= 1")


@dataclass(frozen=True)
class SampleStore:
    """Retained posterior draws for the monitored nodes.

    Retention rule: counting sweeps from 1, a sweep is kept when it is past
    burn-in and (sweep - burn_in) is a multiple of thin, giving exactly
    floor((sweeps - burn_in) / thin) retained draws.
    """

    node_ids: tuple[str, ...]
    draws: tuple[dict, ...]
    burn_in: int
    thin: int
    rng_seed: int
    sweep_count: int
    digest: str | None = None

    @property
    def retained(self) -> int:
        return len(self.draws)

    def column(self, node_id: str) -> np.ndarray:
        return np.array([d[node_id] for d in self.draws])


def _freeze(value):
    if isinstance(value, np.ndarray):
        return tuple(float(v) for v in value)
    return float(value)


def run_chain(net: Network, config: ChainConfig) -> SampleStore:
    """Run one Gibbs chain on a copy of the network."""
    for m in config.monitored:
        if m not in net.nodes:
            raise ConfigError(f"monitored node {m!r} is not in the network")
    work = net.copy()
    initialize(work)
    streams = StreamRegistry(config.seed)
    draws: list[dict] = []
    for sweep in range(1, config.sweeps + 1):
        gibbs_sweep(work, streams)
        if sweep > config.burn_in and (sweep - config.burn_in) % config.thin == 0:
            draws.append({m: _freeze(work.value(m)) for m in config.monitored})
    return SampleStore(
        node_ids=tuple(config.monitored),
        draws=tuple(draws),
        burn_in=config.burn_in,
        thin=config.thin,
        rng_seed=config.seed,
        sweep_count=config.sweeps,
    )
