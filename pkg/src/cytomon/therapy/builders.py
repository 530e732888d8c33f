"""Network builders: assemble the layered toxicity network (hyperparameter,
response-parameter, deterministic per-cycle, and observation layers) from
patient records via plate expansion."""

from __future__ import annotations

from .. import kernels
from ..errors import StructuralError
from ..graph import (
    Categorical,
    Computed,
    Dirichlet,
    DiscreteUniformGrid,
    Gamma,
    Network,
    Normal,
    PlateTemplate,
    TRef,
    TemplateNode,
    expand_plates,
    register_slot_fn,
)
from .types import CycleObservation, HyperPriorConfig, Hyperparams, ModelConstants, PatientRecord


def _wbc_mean(lam, omega, tau, gamma, w0, r, t):
    return kernels.profile_mean(t, w0, lam, omega, tau, gamma, r)


register_slot_fn("wbc_mean", _wbc_mean)
register_slot_fn("dose_decline", lambda alpha, k, dose: k * dose * alpha)
register_slot_fn("cycle_nadir", lambda lam, tau, w0: w0 - lam * tau)


def _template_nodes(records: list[PatientRecord], hyper, consts: ModelConstants, per_patient: bool):
    """Template nodes shared by the single-patient and population builders.
    With per_patient=False there is exactly one record and the response
    layer is unindexed."""
    idx = ("i",) if per_patient else ()
    nodes: list[TemplateNode] = []

    with_hyper = isinstance(hyper, HyperPriorConfig)
    if with_hyper:
        nodes += [
            TemplateNode("pi_alpha", (), "stochastic", dist=Dirichlet(hyper.dirichlet_conc)),
            TemplateNode("pi_gamma", (), "stochastic", dist=Dirichlet(hyper.dirichlet_conc)),
            TemplateNode("pi_tau", (), "stochastic", dist=Dirichlet(hyper.dirichlet_conc)),
            TemplateNode("a", (), "stochastic", dist=DiscreteUniformGrid(hyper.a_grid)),
            TemplateNode("b", (), "stochastic", dist=DiscreteUniformGrid(hyper.b_grid)),
        ]
        pmf_a, pmf_g, pmf_t = TRef("pi_alpha"), TRef("pi_gamma"), TRef("pi_tau")
        shape, rate = TRef("a"), TRef("b")
    elif isinstance(hyper, Hyperparams):
        pmf_a, pmf_g, pmf_t = hyper.pi_alpha, hyper.pi_gamma, hyper.pi_tau
        shape, rate = hyper.a, hyper.b
    else:
        raise StructuralError(f"hyper must be Hyperparams or HyperPriorConfig, got {type(hyper)}")

    def grid_check(grid, pmf):
        if not isinstance(pmf, TRef) and len(pmf) != len(grid):
            raise StructuralError(f"pmf length {len(pmf)} does not match grid {grid}")

    for grid, pmf in (
        (consts.alpha_grid, pmf_a),
        (consts.gamma_grid, pmf_g),
        (consts.tau_grid, pmf_t),
    ):
        grid_check(grid, pmf)

    nodes += [
        TemplateNode("alpha", idx, "stochastic", dist=Categorical(consts.alpha_grid, pmf_a)),
        TemplateNode("gamma", idx, "stochastic", dist=Categorical(consts.gamma_grid, pmf_g)),
        TemplateNode("tau", idx, "stochastic", dist=Categorical(consts.tau_grid, pmf_t)),
        TemplateNode("prec", idx, "stochastic", dist=Gamma(shape, rate)),
    ]

    def record_of(assignment) -> PatientRecord:
        return records[assignment["i"] - 1] if per_patient else records[0]

    def cycle_of(assignment) -> CycleObservation:
        return record_of(assignment).cycles[assignment["j"] - 1]

    def lam_det(assignment):
        cyc = cycle_of(assignment)
        return Computed(
            "dose_decline",
            (("alpha", TRef("alpha")),),
            (("k", consts.k), ("dose", cyc.dose_std)),
        )

    def omega_det(assignment):
        cyc = cycle_of(assignment)
        return Computed(
            "cycle_nadir",
            (("lam", TRef("lam")), ("tau", TRef("tau"))),
            (("w0", cyc.w0),),
        )

    def w_dist(assignment):
        cyc = cycle_of(assignment)
        t = cyc.times[assignment["k"] - 1]
        mean = Computed(
            "wbc_mean",
            (
                ("lam", TRef("lam")),
                ("omega", TRef("omega")),
                ("tau", TRef("tau")),
                ("gamma", TRef("gamma")),
            ),
            (("w0", cyc.w0), ("r", consts.r), ("t", t)),
        )
        return Normal(mean=mean, precision=TRef("prec"))

    cyc_idx = idx + ("j",)
    obs_idx = idx + ("j", "k")
    nodes += [
        TemplateNode("lam", cyc_idx, "deterministic", det=lam_det),
        TemplateNode("omega", cyc_idx, "deterministic", det=omega_det),
        TemplateNode(
            "w",
            obs_idx,
            "observed",
            dist=w_dist,
            value=lambda a: cycle_of(a).wbc_log[a["k"] - 1],
        ),
    ]
    return nodes


def build_patient_network(
    record: PatientRecord, hyper, consts: ModelConstants
) -> Network:
    """Network for one patient. ``hyper`` is either fixed Hyperparams
    (case-specific updating) or a HyperPriorConfig, which attaches the five
    hyperparameter nodes."""
    if not record.cycles:
        raise StructuralError(f"patient {record.patient_id}: record has no cycles")
    template = PlateTemplate(
        indices=("j", "k"), nodes=_template_nodes([record], hyper, consts, per_patient=False)
    )
    counts = {
        "j": len(record.cycles),
        "k": lambda a: len(record.cycles[a["j"] - 1].times),
    }
    return expand_plates(template, counts)


def build_population_network(
    records: list[PatientRecord], hyper: HyperPriorConfig, consts: ModelConstants
) -> Network:
    """Shared hyperparameter layer over per-patient response layers;
    patients are conditionally independent given the hyperparameters."""
    if not records:
        raise StructuralError("need at least one patient record")
    ids = [r.patient_id for r in records]
    if len(ids) != len(set(ids)):
        raise StructuralError("duplicate patient ids in database")
    if not isinstance(hyper, HyperPriorConfig):
        raise StructuralError("population network requires HyperPriorConfig hyperpriors")
    template = PlateTemplate(
        indices=("i", "j", "k"), nodes=_template_nodes(records, hyper, consts, per_patient=True)
    )
    counts = {
        "i": len(records),
        "j": lambda a: len(records[a["i"] - 1].cycles),
        "k": lambda a: len(records[a["i"] - 1].cycles[a["j"] - 1].times),
    }
    return expand_plates(template, counts)


HYPER_NODE_IDS = ("pi_alpha", "pi_gamma", "pi_tau", "a", "b")
RESPONSE_NODE_IDS = ("alpha", "gamma", "tau", "prec")
