from .config import AppConfig, default_config, load_config
from .patientdb import db_digest, load_patient_db, save_patient_db
from .samples import (
    load_case_posterior,
    load_case_prior,
    load_population,
    load_samples,
    save_case_posterior,
    save_case_prior,
    save_cloud_csv,
    save_population,
    save_samples,
)

__all__ = [
    "AppConfig",
    "db_digest",
    "default_config",
    "load_case_posterior",
    "load_case_prior",
    "load_config",
    "load_patient_db",
    "load_population",
    "load_samples",
    "save_case_posterior",
    "save_case_prior",
    "save_cloud_csv",
    "save_patient_db",
    "save_population",
    "save_samples",
]
