"""HTTP monitoring service: workflow, error mapping, read-only predicts."""

import json
import math

import pytest
from fastapi.testclient import TestClient

from cytomon.graph import ChainConfig
from cytomon.inference import population_update
from cytomon.iolib.config import default_config
from cytomon.service import create_app
from cytomon.therapy.types import HyperPriorConfig

FAST_CHAIN = ChainConfig(sweeps=120, burn_in=20, thin=2, seed=5)


@pytest.fixture(scope="module")
def population(synthetic_cohort):
    records, _, consts = synthetic_cohort
    return population_update(records, consts, HyperPriorConfig(), FAST_CHAIN, db_digest="t")


@pytest.fixture()
def client(population):
    cfg = default_config()
    cfg = type(cfg)(consts=cfg.consts, hyper=cfg.hyper, chain=FAST_CHAIN, quantiles=cfg.quantiles)
    return TestClient(create_app(cfg, population))


def make_cycle(index, dose=10.0):
    return {
        "cycle_index": index,
        "dose_std": dose,
        "t0": 0.0,
        "w0": math.exp(8.0),
        "times": [2.0, 4.0, 6.0, 9.0, 13.0],
        "wbc": [2000.0, 1200.0, 700.0, 900.0, 1500.0],
    }


def register(client, pid="p-test"):
    r = client.post("/patients", json={"patient_id": pid, "collapse_count": 2000})
    assert r.status_code == 201, r.text
    return r.json()


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["population_loaded"] is True


def test_create_returns_prior_pmfs(client):
    body = register(client)
    for key in ("alpha", "gamma", "tau"):
        pmf = body["prior"][key]
        assert len(pmf) == 3
        assert sum(pmf.values()) == pytest.approx(1.0, abs=1e-9)


def test_create_duplicate_409(client):
    register(client)
    r = client.post("/patients", json={"patient_id": "p-test"})
    assert r.status_code == 409


def test_workflow_cycle_update_posterior(client):
    register(client)
    r = client.post("/patients/p-test/cycles", json=make_cycle(1))
    assert r.status_code == 202
    assert r.json()["data_window"] == [1]

    r = client.post("/patients/p-test/update", json={})
    assert r.status_code == 200, r.text
    body = r.json()
    assert body["version"] == 1
    assert body["data_window"] == [1]
    for pmf in body["marginals"].values():
        assert sum(pmf.values()) == pytest.approx(1.0, abs=1e-9)

    r = client.get("/patients/p-test/posterior", params={"version": 1})
    assert r.status_code == 200
    assert r.json() == body


def test_version_window_monotone(client):
    register(client)
    client.post("/patients/p-test/cycles", json=make_cycle(1))
    client.post("/patients/p-test/update", json={})
    client.post("/patients/p-test/cycles", json=make_cycle(2))
    r = client.post("/patients/p-test/update", json={})
    assert r.json()["version"] == 2
    w1 = client.get("/patients/p-test/posterior", params={"version": 1}).json()["data_window"]
    w2 = r.json()["data_window"]
    assert set(w1) < set(w2)


def test_update_before_cycle_409(client):
    register(client)
    r = client.post("/patients/p-test/update", json={})
    assert r.status_code == 409


def test_unknown_patient_404(client):
    assert client.post("/patients/nobody/cycles", json=make_cycle(1)).status_code == 404
    assert client.post("/patients/nobody/update", json={}).status_code == 404
    assert client.get("/patients/nobody/posterior").status_code == 404
    assert client.post("/patients/nobody/predict", json={"cycles": []}).status_code == 404


def test_invalid_body_400_with_field_path(client):
    register(client)
    bad = make_cycle(1)
    bad["wbc"] = "not-a-list"
    r = client.post("/patients/p-test/cycles", json=bad)
    assert r.status_code == 400
    assert any(e["field"] == "wbc" for e in r.json()["errors"])


def test_noncontiguous_cycle_400(client):
    register(client)
    r = client.post("/patients/p-test/cycles", json=make_cycle(3))
    assert r.status_code == 400


def test_predict_deterministic_and_read_only(client):
    register(client)
    client.post("/patients/p-test/cycles", json=make_cycle(1))
    before = client.post("/patients/p-test/update", json={}).json()
    plan = {
        "cycles": [{"cycle_index": 2, "dose_std": 10.0, "offsets": [2.0, 6.0, 10.0]}],
        "seed": 11,
        "noise": True,
    }
    r1 = client.post("/patients/p-test/predict", json=plan)
    r2 = client.post("/patients/p-test/predict", json=plan)
    assert r1.status_code == 200, r1.text
    assert r1.json() == r2.json()
    assert r1.json()["posterior_digest"] == before["digest"]
    after = client.get("/patients/p-test/posterior").json()
    assert after == before


def test_predict_zero_dose_no_noise_flat_band(client):
    register(client)
    client.post("/patients/p-test/cycles", json=make_cycle(1))
    client.post("/patients/p-test/update", json={})
    plan = {
        "cycles": [{"cycle_index": 2, "dose_std": 0.0, "offsets": [2.0, 6.0, 10.0]}],
        "noise": False,
        "w0_policy": "last_observed",
    }
    r = client.post("/patients/p-test/predict", json=plan)
    assert r.status_code == 200, r.text
    for band in r.json()["bands"]:
        for value in band["quantiles"].values():
            assert value == pytest.approx(8.0, abs=1e-9)


def test_predict_misaligned_plan_400(client):
    register(client)
    client.post("/patients/p-test/cycles", json=make_cycle(1))
    client.post("/patients/p-test/update", json={})
    plan = {"cycles": [{"cycle_index": 5, "dose_std": 10.0, "offsets": [2.0]}]}
    assert client.post("/patients/p-test/predict", json=plan).status_code == 400


def test_predict_before_update_409(client):
    register(client)
    client.post("/patients/p-test/cycles", json=make_cycle(1))
    plan = {"cycles": [{"cycle_index": 2, "dose_std": 10.0, "offsets": [2.0]}]}
    assert client.post("/patients/p-test/predict", json=plan).status_code == 409


def test_nonblocking_update_polls_to_completion(client):
    register(client)
    client.post("/patients/p-test/cycles", json=make_cycle(1))
    r = client.post("/patients/p-test/update", params={"wait": "false"}, json={})
    assert r.status_code == 202
    version = r.json()["version"]
    for _ in range(200):
        r = client.get("/patients/p-test/posterior", params={"version": version})
        if r.status_code == 200:
            break
    assert r.status_code == 200
    assert r.json()["version"] == version


def test_population_endpoint_refits(client, synthetic_db_path):
    r = client.post(
        "/population",
        json={"db_path": str(synthetic_db_path), "sweeps": 40, "burn_in": 10, "thin": 2},
    )
    assert r.status_code == 200, r.text
    body = r.json()
    assert body["patients"] == 12
    assert body["draws"] == 15
    for pmf in body["summary_pmfs"].values():
        assert sum(pmf.values()) == pytest.approx(1.0, abs=1e-9)


def test_population_missing_db_400(client, tmp_path):
    r = client.post("/population", json={"db_path": str(tmp_path / "nope.csv")})
    assert r.status_code in (400, 500)
    assert r.status_code == 400 or "detail" in r.json()
