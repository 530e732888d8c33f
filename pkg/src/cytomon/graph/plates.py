"""Plate templates: compact node declarations with index placeholders that
expand into the full repetitive network structure.

An index count may be an int or a callable of the outer index assignment,
which supports ragged layouts (patients with different cycle counts).
Parent references (``TRef``) bind by index subset: a parent declared over
fewer indices is shared by every child instance, which is how whole-layer
arrows expand to full cross-layer parent sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

from ..errors import StructuralError
from .dists import Binding, Computed, Dist, Ref
from .network import NodeSpec, Network


@dataclass(frozen=True)
class TRef:
    """Reference to a template node, resolved during expansion."""

    base: str


def expand_id(base: str, indices: tuple[str, ...], assignment: dict[str, int]) -> str:
    if not indices:
        return base
    return f"{base}[{','.join(str(assignment[i]) for i in indices)}]"


@dataclass
class TemplateNode:
    base: str
    indices: tuple[str, ...]
    kind: str
    dist: Union[Dist, Callable[[dict[str, int]], Dist], None] = None
    det: Union[Computed, Callable[[dict[str, int]], Computed], None] = None
    value: object = None  # constant or callable(assignment)


@dataclass
class PlateTemplate:
    indices: tuple[str, ...]  # nesting order, outermost first
    nodes: list[TemplateNode] = field(default_factory=list)

    def __post_init__(self):
        bases = [n.base for n in self.nodes]
        if len(bases) != len(set(bases)):
            raise StructuralError("duplicate template node base")
        declared = set(self.indices)
        for n in self.nodes:
            for ix in n.indices:
                if ix not in declared:
                    raise StructuralError(f"template node {n.base}: undeclared index {ix!r}")
            if list(n.indices) != [i for i in self.indices if i in n.indices]:
                raise StructuralError(f"template node {n.base}: indices out of nesting order")


def _rewrite(b, template_by_base, assignment, child_indices):
    """Replace TRefs with concrete Refs for one child instance."""
    if isinstance(b, TRef):
        parent = template_by_base.get(b.base)
        if parent is None:
            raise StructuralError(f"reference to unknown template node {b.base!r}")
        missing = [i for i in parent.indices if i not in child_indices]
        if missing:
            raise StructuralError(
                f"unresolved placeholder: parent {b.base!r} indexed by {missing} "
                f"outside child scope"
            )
        return Ref(expand_id(parent.base, parent.indices, assignment))
    if isinstance(b, Computed):
        return Computed(
            b.fn,
            tuple((k, _rewrite(a, template_by_base, assignment, child_indices)) for k, a in b.args),
            b.consts,
        )
    return b


def _assignments(template, counts, node_indices):
    """All index assignments for one template node, outermost varying slowest."""
    out: list[dict[str, int]] = [{}]
    for ix in template.indices:
        if ix not in node_indices:
            continue
        nxt = []
        for a in out:
            c = counts[ix]
            # fixed counts must be >= 1; ragged (callable) counts may be 0
            # for instances that simply have no members
            n = c(a) if callable(c) else c
            if n < (0 if callable(c) else 1):
                raise StructuralError(f"index {ix!r} has invalid count {n}")
            for v in range(1, n + 1):
                b = dict(a)
                b[ix] = v
                nxt.append(b)
        out = nxt
    return out


def expand_plates(template: PlateTemplate, counts: dict[str, object]) -> Network:
    """Instantiate every template node over its index ranges and wire the
    expanded parent references; returns a validated acyclic Network."""
    for ix in template.indices:
        if ix not in counts:
            raise StructuralError(f"no count given for index {ix!r}")
    by_base = {n.base: n for n in template.nodes}
    nodes: list[NodeSpec] = []
    for tn in template.nodes:
        for assignment in _assignments(template, counts, set(tn.indices)):
            nid = expand_id(tn.base, tn.indices, assignment)
            dist = tn.dist(assignment) if callable(tn.dist) else tn.dist
            det = tn.det(assignment) if callable(tn.det) else tn.det
            value = tn.value(assignment) if callable(tn.value) else tn.value
            child_scope = set(tn.indices)
            if dist is not None:
                bindings = [
                    _rewrite(b, by_base, assignment, child_scope) for b in dist.param_bindings()
                ]
                dist = _rebind(dist, bindings)
            if det is not None:
                det = _rewrite(det, by_base, assignment, child_scope)
            nodes.append(NodeSpec(id=nid, kind=tn.kind, dist=dist, det=det, value=value))
    return Network(nodes)


def _rebind(dist: Dist, bindings: list[Binding]) -> Dist:
    """Rebuild a dist with rewritten param bindings, preserving slot order."""
    import copy

    d = copy.copy(dist)
    from .dists import Categorical, DiscreteUniformGrid, Dirichlet, Gamma, Normal, UniformInterval

    if isinstance(d, Normal):
        d.mean = bindings[0]
        if d.variance is not None:
            d.variance = bindings[1]
        else:
            d.precision = bindings[1]
    elif isinstance(d, Gamma):
        d.shape, d.rate = bindings
    elif isinstance(d, Categorical):
        d.pmf = bindings[0]
    elif isinstance(d, (Dirichlet, UniformInterval, DiscreteUniformGrid)):
        pass
    else:
        raise StructuralError(f"cannot rebind dist {type(d).__name__}")
    return d
