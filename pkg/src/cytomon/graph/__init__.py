from .dists import (
    Categorical,
    Computed,
    Dirichlet,
    DiscreteUniformGrid,
    Dist,
    Gamma,
    Normal,
    Ref,
    UniformInterval,
    register_slot_fn,
)
from .gibbs import (
    ChainConfig,
    SampleStore,
    full_conditional_logpdf,
    gibbs_sweep,
    initialize,
    run_chain,
    sample_full_conditional,
)
from .network import DETERMINISTIC, OBSERVED, STOCHASTIC, Network, NodeSpec
from .plates import PlateTemplate, TemplateNode, TRef, expand_plates

__all__ = [
    "Categorical",
    "ChainConfig",
    "Computed",
    "DETERMINISTIC",
    "Dirichlet",
    "DiscreteUniformGrid",
    "Dist",
    "Gamma",
    "Network",
    "NodeSpec",
    "Normal",
    "OBSERVED",
    "PlateTemplate",
    "Ref",
    "STOCHASTIC",
    "SampleStore",
    "TRef",
    "TemplateNode",
    "UniformInterval",
    "expand_plates",
    "full_conditional_logpdf",
    "gibbs_sweep",
    "initialize",
    "register_slot_fn",
    "run_chain",
    "sample_full_conditional",
]
