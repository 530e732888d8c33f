"""Directed-graph representation of a Bayesian network.

Deterministic nodes carry a ``Computed`` binding and are recomputed
whenever an ancestor changes; Markov blankets are taken on the
stochastic/observed skeleton obtained by splicing deterministic nodes
into their consumers.
"""

from __future__ import annotations

import copy as _copy
from dataclasses import dataclass, field, replace

from ..errors import ContractError, StructuralError
from .dists import Binding, Computed, Dist, binding_refs, resolve

STOCHASTIC = "stochastic"
OBSERVED = "observed"
DETERMINISTIC = "deterministic"
_KINDS = {STOCHASTIC, OBSERVED, DETERMINISTIC}


@dataclass
class NodeSpec:
    id: str
    kind: str
    dist: Dist | None = None
    det: Computed | None = None
    value: object = None
    parents: tuple[str, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise StructuralError(f"node {self.id}: unknown kind {self.kind!r}")
        if self.kind == DETERMINISTIC:
            if self.dist is not None or self.det is None:
                raise StructuralError(f"node {self.id}: deterministic nodes take det and no dist")
            refs = binding_refs(self.det)
            if not refs:
                raise StructuralError(f"node {self.id}: deterministic node needs >=1 parent")
        else:
            if self.dist is None or self.det is not None:
                raise StructuralError(f"node {self.id}: {self.kind} nodes need a dist and no det")
            refs = []
            for b in self.dist.param_bindings():
                refs.extend(binding_refs(b))
        if self.kind == OBSERVED and self.value is None:
            raise StructuralError(f"node {self.id}: observed node needs a value")
        if self.parents is None:
            seen: list[str] = []
            for r in refs:
                if r not in seen:
                    seen.append(r)
            self.parents = tuple(seen)


class Network:
    """Acyclic node collection with topological-order and blanket caches."""

    def __init__(self, nodes: list[NodeSpec]):
        self.nodes: dict[str, NodeSpec] = {}
        for n in nodes:
            if n.id in self.nodes:
                raise StructuralError(f"duplicate node id {n.id!r}")
            self.nodes[n.id] = n
        for n in self.nodes.values():
            for p in n.parents:
                if p not in self.nodes:
                    raise StructuralError(f"node {n.id}: unresolved parent {p!r}")
        self.order = self._toposort()
        self._children: dict[str, list[str]] = {i: [] for i in self.nodes}
        for n in self.nodes.values():
            for p in n.parents:
                self._children[p].append(n.id)
        self._eff_parents: dict[str, tuple[str, ...]] = {}
        self._eff_children: dict[str, tuple[str, ...]] | None = None
        self.refresh_deterministic()

    def _toposort(self) -> list[str]:
        indeg = {i: len(n.parents) for i, n in self.nodes.items()}
        ready = sorted(i for i, d in indeg.items() if d == 0)
        order: list[str] = []
        while ready:
            ready.sort()
            i = ready.pop(0)
            order.append(i)
            for c in sorted(self.nodes[j].id for j in self.nodes if i in self.nodes[j].parents):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.nodes):
            raise StructuralError("network contains a cycle")
        return order

    # -- values ----------------------------------------------------------

    def value(self, node_id: str):
        return self.nodes[node_id].value

    def set_value(self, node_id: str, value) -> None:
        n = self.nodes[node_id]
        if n.kind == OBSERVED:
            raise ContractError(f"node {node_id} is observed; its value is immutable")
        n.value = value

    def refresh_deterministic(self) -> None:
        for i in self.order:
            n = self.nodes[i]
            if n.kind == DETERMINISTIC:
                # parents may be uninitialized before the first sweep
                if any(self.nodes[p].value is None for p in n.parents):
                    n.value = None
                else:
                    n.value = resolve(n.det, self.value)

    # -- skeleton and blankets ------------------------------------------

    def effective_parents(self, node_id: str) -> tuple[str, ...]:
        """Parents mapped through deterministic nodes onto the
        stochastic/observed skeleton."""
        cached = self._eff_parents.get(node_id)
        if cached is not None:
            return cached
        out: list[str] = []
        for p in self.nodes[node_id].parents:
            pn = self.nodes[p]
            src = self.effective_parents(p) if pn.kind == DETERMINISTIC else (p,)
            for s in src:
                if s not in out:
                    out.append(s)
        self._eff_parents[node_id] = tuple(out)
        return self._eff_parents[node_id]

    def _effective_children(self) -> dict[str, tuple[str, ...]]:
        if self._eff_children is None:
            kids: dict[str, list[str]] = {i: [] for i in self.nodes}
            for i in self.order:
                if self.nodes[i].kind == DETERMINISTIC:
                    continue
                for p in self.effective_parents(i):
                    kids[p].append(i)
            self._eff_children = {i: tuple(v) for i, v in kids.items()}
        return self._eff_children

    def children_in_skeleton(self, node_id: str) -> tuple[str, ...]:
        return self._effective_children()[node_id]

    def markov_blanket(self, node_id: str) -> set[str]:
        n = self.nodes.get(node_id)
        if n is None:
            raise ContractError(f"unknown node {node_id!r}")
        if n.kind != STOCHASTIC:
            raise ContractError(f"markov blanket is defined for stochastic nodes, not {n.kind}")
        blanket = set(self.effective_parents(node_id))
        for c in self.children_in_skeleton(node_id):
            blanket.add(c)
            blanket.update(self.effective_parents(c))
        blanket.discard(node_id)
        return blanket

    def det_descendants(self, node_id: str) -> list[str]:
        """Deterministic nodes downstream of node_id, in topological order."""
        hit = {node_id}
        out = []
        for i in self.order:
            n = self.nodes[i]
            if any(p in hit for p in n.parents):
                hit.add(i)
                if n.kind == DETERMINISTIC:
                    out.append(i)
        return out

    def unobserved_stochastic(self) -> list[str]:
        return [i for i in self.order if self.nodes[i].kind == STOCHASTIC]

    def copy(self) -> "Network":
        return _copy.deepcopy(self)
