"""File formats: round trips, ingestion errors, config validation."""

import json
import logging
import math

import pytest

from cytomon.errors import ConfigError, DataError, FormatVersionError
from cytomon.graph import ChainConfig, SampleStore
from cytomon.inference import CasePosterior, CasePrior, PopulationPosterior
from cytomon.iolib import (
    db_digest,
    load_case_posterior,
    load_case_prior,
    load_config,
    load_patient_db,
    load_population,
    load_samples,
    save_case_posterior,
    save_case_prior,
    save_population,
    save_samples,
)


def make_store():
    draws = tuple(
        {"a": 1.0 + i * 0.3333333333333333, "pi": (0.2 + 0.001 * i, 0.5, 0.3 - 0.001 * i)}
        for i in range(7)
    )
    return SampleStore(
        node_ids=("a", "pi"),
        draws=draws,
        burn_in=3,
        thin=2,
        rng_seed=42,
        sweep_count=17,
        digest="abc123",
    )


def test_samples_round_trip(tmp_path):
    store = make_store()
    p = tmp_path / "s.samples"
    save_samples(store, p)
    back = load_samples(p)
    assert back == store


def test_samples_truncated_file_names_offset(tmp_path):
    store = make_store()
    p = tmp_path / "s.samples"
    save_samples(store, p)
    data = p.read_bytes()
    p.write_bytes(data[: len(data) - 10])
    with pytest.raises(DataError, match="byte offset"):
        load_samples(p)


def test_samples_version_mismatch(tmp_path):
    p = tmp_path / "s.samples"
    save_samples(make_store(), p)
    p.write_text(p.read_text().replace("v1", "v9", 1))
    with pytest.raises(FormatVersionError):
        load_samples(p)


def test_samples_not_a_samples_file(tmp_path):
    p = tmp_path / "junk"
    p.write_text("hello\n")
    with pytest.raises(DataError):
        load_samples(p)


def test_samples_digest_mismatch_warns_but_loads(tmp_path, caplog):
    p = tmp_path / "s.samples"
    save_samples(make_store(), p)
    with caplog.at_level(logging.WARNING):
        store = load_samples(p, expected_digest="different")
    assert store.retained == 7
    assert any("digest" in r.message for r in caplog.records)


def test_population_round_trip(tmp_path):
    pop = PopulationPosterior(
        draws=(
            {"pi_alpha": (0.2, 0.5, 0.3), "pi_gamma": (0.4, 0.3, 0.3), "pi_tau": (0.1, 0.8, 0.1), "a": 2.0, "b": 0.2},
        ),
        chain=ChainConfig(sweeps=500, burn_in=100, thin=5, seed=7,
                          monitored=("pi_alpha", "pi_gamma", "pi_tau", "a", "b")),
        db_digest="d1",
    )
    p = tmp_path / "pop.post"
    save_population(pop, p)
    assert load_population(p) == pop


def test_case_prior_and_posterior_round_trip(tmp_path):
    prior = CasePrior((0.2, 0.5, 0.3), (1 / 3, 1 / 3, 1 / 3), (0.25, 0.5, 0.25), 2.0, 0.2, 1000)
    pp = tmp_path / "prior.json"
    save_case_prior(prior, pp)
    assert load_case_prior(pp) == prior

    post = CasePosterior(
        draws=({"alpha": 2.0, "gamma": 0.2, "tau": 8.0, "prec": 11.1},),
        marginals={"alpha": (0.0, 0.0, 1.0), "gamma": (0.0, 1.0, 0.0), "tau": (0.0, 1.0, 0.0)},
        data_window=(1, 2),
        prior=prior,
        last_w0=8.0,
        seed=3,
    )
    cp = tmp_path / "case.post"
    save_case_posterior(post, cp)
    assert load_case_posterior(cp) == post


# -- patient db ----------------------------------------------------------

HEADER = "patient_id,cycle_index,dose_std,t0,w0,t_offset,wbc\n"


def write_db(tmp_path, body, name="db.csv"):
    p = tmp_path / name
    p.write_text(HEADER + body)
    return p


def test_db_empty_body_warns(tmp_path, caplog):
    p = write_db(tmp_path, "")
    with caplog.at_level(logging.WARNING):
        assert load_patient_db(p) == []
    assert any("no records" in r.message for r in caplog.records)


def test_db_natural_log_at_ingestion(tmp_path):
    p = write_db(tmp_path, "p1,1,10,0,3000,2.0,1000\n")
    rec = load_patient_db(p)[0]
    assert rec.cycles[0].wbc_log[0] == pytest.approx(math.log(1000), abs=1e-12)
    assert rec.cycles[0].w0 == pytest.approx(math.log(3000), abs=1e-12)


def test_db_interleaved_patients_grouped(tmp_path):
    body = (
        "p1,1,10,0,3000,2.0,1200\n"
        "p2,1,12,0,2900,2.0,1100\n"
        "p1,1,10,0,3000,4.0,900\n"
        "p2,1,12,0,2900,5.0,800\n"
        "p1,2,10,0,2800,2.0,1000\n"
    )
    recs = {r.patient_id: r for r in load_patient_db(write_db(tmp_path, body))}
    assert set(recs) == {"p1", "p2"}
    assert len(recs["p1"].cycles) == 2
    assert recs["p1"].cycles[0].times == (2.0, 4.0)
    assert len(recs["p2"].cycles) == 1


def test_db_nonpositive_wbc_reports_line(tmp_path):
    p = write_db(tmp_path, "p1,1,10,0,3000,2.0,1200\np1,1,10,0,3000,4.0,0\n")
    with pytest.raises(DataError, match=":3"):
        load_patient_db(p)


def test_db_unsorted_times_repaired_with_warning(tmp_path, caplog):
    p = write_db(tmp_path, "p1,1,10,0,3000,4.0,900\np1,1,10,0,3000,2.0,1200\n")
    with caplog.at_level(logging.WARNING):
        rec = load_patient_db(p)[0]
    assert rec.cycles[0].times == (2.0, 4.0)
    assert any("unsorted" in r.message for r in caplog.records)


def test_db_duplicate_time_rejected(tmp_path):
    p = write_db(tmp_path, "p1,1,10,0,3000,2.0,900\np1,1,10,0,3000,2.0,901\n")
    with pytest.raises(DataError, match="duplicate"):
        load_patient_db(p)


def test_db_round_trip(tmp_path, synthetic_cohort, synthetic_db_path):
    records, _, _ = synthetic_cohort
    loaded = load_patient_db(synthetic_db_path)
    assert len(loaded) == len(records)
    for a, b in zip(loaded, records):
        assert a.patient_id == b.patient_id
        for ca, cb in zip(a.cycles, b.cycles):
            assert ca.times == cb.times
            assert ca.wbc_log == pytest.approx(cb.wbc_log, abs=1e-9)
    assert len(db_digest(synthetic_db_path)) == 16


# -- config --------------------------------------------------------------


def test_config_defaults_without_file():
    cfg = load_config(None)
    assert cfg.chain.sweeps == 500
    assert cfg.consts.alpha_grid == (1.0, 1.5, 2.0)


def test_config_env_var(tmp_path, monkeypatch):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"chain": {"seed": 99}}))
    monkeypatch.setenv("CYTOMON_CONFIG", str(p))
    assert load_config(None).chain.seed == 99


def test_config_partial_merge(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"constants": {"k": 0.08}, "chain": {"sweeps": 50, "burn_in": 10}}))
    cfg = load_config(p)
    assert cfg.consts.k == 0.08
    assert (cfg.chain.sweeps, cfg.chain.burn_in, cfg.chain.thin) == (50, 10, 5)


def test_config_invalid_rejected_before_compute(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"grids": {"alpha": [2.0, 1.0, 1.5]}}))
    with pytest.raises(Exception):
        load_config(p)
    p.write_text("not json")
    with pytest.raises(ConfigError):
        load_config(p)
