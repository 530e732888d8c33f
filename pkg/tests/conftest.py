import pytest

from cytomon.iolib import save_patient_db
from cytomon.synthetic import simulate_cohort
from cytomon.therapy import Hyperparams, ModelConstants

COHORT_HYPER = Hyperparams(
    pi_alpha=(0.2, 0.5, 0.3),
    pi_gamma=(1 / 3, 1 / 3, 1 / 3),
    pi_tau=(0.25, 0.5, 0.25),
    a=2.0,
    b=0.02,  # precision ~100 -> sigma ~0.1, low noise
)
COHORT_TIMES = [2.0, 4.0, 6.0, 9.0, 13.0]


@pytest.fixture(scope="session")
def synthetic_cohort():
    consts = ModelConstants()
    records, truths = simulate_cohort(
        COHORT_HYPER, consts, n_patients=12, n_cycles=3, dose=10.0,
        times=COHORT_TIMES, w0=8.0, seed=2024, sigma_override=0.15, stratified=True,
    )
    return records, truths, consts


@pytest.fixture(scope="session")
def synthetic_db_path(tmp_path_factory, synthetic_cohort):
    records, _, _ = synthetic_cohort
    path = tmp_path_factory.mktemp("db") / "cohort.csv"
    save_patient_db(records, path)
    return path
