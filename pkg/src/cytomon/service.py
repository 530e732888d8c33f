"""HTTP monitoring service: patient sessions over the population →
collapse → case-update → predict pipeline.

Concurrency: requests are handled concurrently across sessions; writes to
one session (cycle appends and updates) are serialized by a per-session
lock, so at most one update is in flight per patient. Updates run on a
worker thread; the ``wait`` query flag selects blocking (default) or
polling via ``GET /patients/{id}/posterior``. Predictions are read-only
and may overlap freely.
"""

from __future__ import annotations

import hashlib
import math
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import replace

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import CapabilityError, ContractError, CytomonError, DataError
from .inference import (
    CasePosterior,
    CasePrior,
    DosePlan,
    PlanCycle,
    PopulationPosterior,
    case_update,
    collapse,
    population_update,
    predict,
)
from .iolib.config import AppConfig
from .iolib.patientdb import db_digest, load_patient_db
from .therapy import CycleObservation, PatientRecord

MAX_CLOUD_POINTS = 500


# -- request bodies ------------------------------------------------------


class PopulationBody(BaseModel):
    db_path: str
    sweeps: int | None = None
    burn_in: int | None = None
    thin: int | None = None
    seed: int | None = None


class CreatePatientBody(BaseModel):
    patient_id: str = Field(min_length=1)
    collapse_count: int = 10_000
    collapse_method: str = "closed_form"
    seed: int = 0


class CycleBody(BaseModel):
    cycle_index: int
    dose_std: float
    t0: float = 0.0
    w0: float = Field(gt=0, description="raw pre-cycle count")
    times: list[float]
    wbc: list[float] = Field(description="raw counts")


class UpdateBody(BaseModel):
    seed: int | None = None


class PlanCycleBody(BaseModel):
    cycle_index: int
    dose_std: float
    offsets: list[float]


class PredictBody(BaseModel):
    cycles: list[PlanCycleBody]
    seed: int = 0
    noise: bool = True
    w0_policy: str = "last_observed"
    version: int | None = None


# -- session state -------------------------------------------------------


class PatientSession:
    """Per-patient state: collapsed prior, appended cycles, and the
    append-only list of posterior versions."""

    def __init__(self, patient_id: str, prior: CasePrior):
        self.patient_id = patient_id
        self.prior = prior
        self.cycles: list[CycleObservation] = []
        self.versions: list[CasePosterior] = []
        self.pending: Future | None = None
        self.lock = threading.Lock()

    def record(self) -> PatientRecord:
        return PatientRecord(self.patient_id, tuple(self.cycles))


def _pmf_payload(levels, pmf) -> dict:
    return {str(level): p for level, p in zip(levels, pmf)}


def _prior_payload(prior: CasePrior, consts) -> dict:
    return {
        "alpha": _pmf_payload(consts.alpha_grid, prior.pmf_alpha),
        "gamma": _pmf_payload(consts.gamma_grid, prior.pmf_gamma),
        "tau": _pmf_payload(consts.tau_grid, prior.pmf_tau),
        "a": prior.a,
        "b": prior.b,
        "draw_count": prior.draw_count,
    }


def _posterior_payload(version: int, post: CasePosterior, consts) -> dict:
    return {
        "version": version,
        "data_window": list(post.data_window),
        "marginals": {
            "alpha": _pmf_payload(consts.alpha_grid, post.marginals["alpha"]),
            "gamma": _pmf_payload(consts.gamma_grid, post.marginals["gamma"]),
            "tau": _pmf_payload(consts.tau_grid, post.marginals["tau"]),
        },
        "draw_count": len(post.draws),
        "seed": post.seed,
        "digest": posterior_digest(post),
    }


def posterior_digest(post: CasePosterior) -> str:
    h = hashlib.sha256(repr((post.draws, post.marginals, post.data_window)).encode())
    return h.hexdigest()[:16]


def create_app(cfg: AppConfig, pop: PopulationPosterior | None = None) -> FastAPI:
    app = FastAPI(title="cytomon monitor")
    state = {"pop": pop}
    sessions: dict[str, PatientSession] = {}
    sessions_lock = threading.Lock()
    pool = ThreadPoolExecutor(max_workers=4)

    def http_error(status: int, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"detail": detail})

    @app.exception_handler(RequestValidationError)
    async def validation_400(request: Request, exc: RequestValidationError):
        fields = [
            {"field": ".".join(str(p) for p in err["loc"] if p != "body"), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": "invalid body", "errors": fields})

    @app.exception_handler(DataError)
    async def data_400(request: Request, exc: DataError):
        return http_error(400, str(exc))

    @app.exception_handler(ContractError)
    async def contract_400(request: Request, exc: ContractError):
        return http_error(400, str(exc))

    @app.exception_handler(CapabilityError)
    async def capability_500(request: Request, exc: CapabilityError):
        return http_error(500, str(exc))

    @app.exception_handler(CytomonError)
    async def other_500(request: Request, exc: CytomonError):
        return http_error(500, str(exc))

    def get_session(patient_id: str) -> PatientSession | None:
        with sessions_lock:
            return sessions.get(patient_id)

    # -- endpoints -------------------------------------------------------

    @app.get("/health")
    async def health():
        return {"status": "ok", "population_loaded": state["pop"] is not None}

    @app.post("/population")
    def fit_population(body: PopulationBody):
        try:
            records = load_patient_db(body.db_path)
        except FileNotFoundError:
            raise DataError(f"patient database not found: {body.db_path}")
        if not records:
            raise DataError(f"{body.db_path}: no patient records")
        chain = cfg.chain
        for name in ("sweeps", "burn_in", "thin", "seed"):
            value = getattr(body, name)
            if value is not None:
                chain = replace(chain, **{name: value})
        state["pop"] = population_update(
            records, cfg.consts, cfg.hyper, chain, db_digest=db_digest(body.db_path)
        )
        pop_now = state["pop"]
        import numpy as np

        summary = {}
        for key, grid in (
            ("pi_alpha", cfg.consts.alpha_grid),
            ("pi_gamma", cfg.consts.gamma_grid),
            ("pi_tau", cfg.consts.tau_grid),
        ):
            mean = np.mean(np.array(pop_now.column(key), dtype=float), axis=0)
            summary[key] = _pmf_payload(grid, tuple(float(v) for v in mean))
        return {
            "patients": len(records),
            "draws": len(pop_now.draws),
            "db_digest": pop_now.db_digest,
            "summary_pmfs": summary,
        }

    @app.post("/patients", status_code=201)
    def create_patient(body: CreatePatientBody):
        if state["pop"] is None:
            return http_error(409, "no population posterior loaded; POST /population first")
        with sessions_lock:
            if body.patient_id in sessions:
                return http_error(409, f"patient {body.patient_id!r} already exists")
            prior = collapse(
                state["pop"],
                count=body.collapse_count,
                method=body.collapse_method,
                seed=body.seed,
            )
            sessions[body.patient_id] = PatientSession(body.patient_id, prior)
        return {"patient_id": body.patient_id, "prior": _prior_payload(prior, cfg.consts)}

    @app.post("/patients/{patient_id}/cycles", status_code=202)
    def add_cycle(patient_id: str, body: CycleBody):
        session = get_session(patient_id)
        if session is None:
            return http_error(404, f"unknown patient {patient_id!r}")
        if any(w <= 0 for w in body.wbc):
            raise DataError("wbc counts must be > 0")
        cycle = CycleObservation(
            cycle_index=body.cycle_index,
            dose_std=body.dose_std,
            t0=body.t0,
            w0=math.log(body.w0),
            times=tuple(body.times),
            wbc_log=tuple(math.log(w) for w in body.wbc),
        )
        with session.lock:
            expected = len(session.cycles) + 1
            if cycle.cycle_index != expected:
                raise DataError(
                    f"cycle_index must be {expected} (cycles are contiguous), got {cycle.cycle_index}"
                )
            session.cycles.append(cycle)
            window = [c.cycle_index for c in session.cycles]
        return {"patient_id": patient_id, "data_window": window}

    @app.post("/patients/{patient_id}/update")
    def update_patient(
        patient_id: str,
        body: UpdateBody | None = None,
        wait: bool = Query(default=True),
    ):
        session = get_session(patient_id)
        if session is None:
            return http_error(404, f"unknown patient {patient_id!r}")
        with session.lock:
            if not session.cycles:
                return http_error(409, "no cycles recorded yet; POST a cycle first")
            if session.pending is not None and not session.pending.done():
                return http_error(409, "an update is already in flight")
            chain = cfg.chain
            if body is not None and body.seed is not None:
                chain = replace(chain, seed=body.seed)
            record = session.record()
            version = len(session.versions) + 1

            def job():
                post = case_update(session.prior, record, cfg.consts, chain)
                with session.lock:
                    session.versions.append(post)
                return post

            session.pending = pool.submit(job)
            future = session.pending
        if not wait:
            return JSONResponse(status_code=202, content={"version": version, "status": "pending"})
        post = future.result()
        return _posterior_payload(version, post, cfg.consts)

    @app.get("/patients/{patient_id}/posterior")
    def get_posterior(patient_id: str, version: int | None = Query(default=None)):
        session = get_session(patient_id)
        if session is None:
            return http_error(404, f"unknown patient {patient_id!r}")
        with session.lock:
            n = len(session.versions)
            pending = session.pending is not None and not session.pending.done()
            v = n if version is None else version
            if v < 1 or v > n:
                if pending and v == n + 1:
                    return JSONResponse(status_code=202, content={"version": v, "status": "pending"})
                return http_error(404, f"no posterior version {v} (have {n})")
            post = session.versions[v - 1]
        return _posterior_payload(v, post, cfg.consts)

    @app.post("/patients/{patient_id}/predict")
    def predict_patient(patient_id: str, body: PredictBody):
        session = get_session(patient_id)
        if session is None:
            return http_error(404, f"unknown patient {patient_id!r}")
        with session.lock:
            n = len(session.versions)
            if n == 0:
                return http_error(409, "no posterior version yet; POST /update first")
            v = n if body.version is None else body.version
            if v < 1 or v > n:
                return http_error(404, f"no posterior version {v} (have {n})")
            post = session.versions[v - 1]
        plan = DosePlan(
            tuple(PlanCycle(c.cycle_index, c.dose_std, tuple(c.offsets)) for c in body.cycles)
        )
        cloud = predict(
            post,
            plan,
            cfg.consts,
            w0_policy=body.w0_policy,
            seed=body.seed,
            noise=body.noise,
            levels=cfg.quantiles,
        )
        stride = max(1, len(cloud.points) // MAX_CLOUD_POINTS)
        points = cloud.points[::stride][:MAX_CLOUD_POINTS]
        return {
            "version": v,
            "seed": body.seed,
            "levels": list(cloud.levels),
            "bands": [
                {
                    "cycle_index": ci,
                    "offset": t,
                    "quantiles": {str(level): value for level, value in q.items()},
                }
                for (ci, t), q in sorted(cloud.quantiles.items())
            ],
            "points": [
                {"cycle_index": ci, "offset": t, "value": value} for ci, t, value in points
            ],
            "posterior_digest": posterior_digest(post),
        }

    return app
