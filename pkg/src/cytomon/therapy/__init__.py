from .builders import (
    HYPER_NODE_IDS,
    RESPONSE_NODE_IDS,
    build_patient_network,
    build_population_network,
)
from .profile import cycle_loglik, decline_rate, mean_log_wbc, mean_profile, nadir
from .types import (
    CycleObservation,
    HyperPriorConfig,
    Hyperparams,
    ModelConstants,
    PatientRecord,
    ResponseParams,
)

__all__ = [
    "CycleObservation",
    "HYPER_NODE_IDS",
    "HyperPriorConfig",
    "Hyperparams",
    "ModelConstants",
    "PatientRecord",
    "RESPONSE_NODE_IDS",
    "ResponseParams",
    "build_patient_network",
    "build_population_network",
    "cycle_loglik",
    "decline_rate",
    "mean_log_wbc",
    "mean_profile",
    "nadir",
]
