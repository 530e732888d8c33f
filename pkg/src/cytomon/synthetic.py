"""Synthetic patient generation for fixtures and verification: draw
response parameters from known population pmfs and simulate noisy log-WBC
profiles from them."""

from __future__ import annotations

import numpy as np

from .rng import stream_for
from .therapy import (
    CycleObservation,
    Hyperparams,
    ModelConstants,
    PatientRecord,
    ResponseParams,
    mean_profile,
)


def simulate_record(
    patient_id: str,
    truth: ResponseParams,
    consts: ModelConstants,
    doses: list[float],
    times: list[float] | list[list[float]],
    w0: float,
    rng: np.random.Generator,
) -> PatientRecord:
    """Noisy record for one patient with known true parameters. ``times``
    is one offset list shared by all cycles or one list per cycle."""
    if times and not isinstance(times[0], (list, tuple)):
        times = [list(times)] * len(doses)
    cycles = []
    for j, (dose, ts) in enumerate(zip(doses, times), start=1):
        cyc = CycleObservation(j, dose, 0.0, w0, tuple(ts), tuple([0.0] * len(ts)))
        means = mean_profile(np.array(ts), cyc, truth, consts)
        wbc = means + rng.standard_normal(len(ts)) * truth.sigma
        cycles.append(CycleObservation(j, dose, 0.0, w0, tuple(ts), tuple(float(v) for v in wbc)))
    return PatientRecord(patient_id, tuple(cycles))


def draw_params(hyper: Hyperparams, consts: ModelConstants, rng: np.random.Generator) -> ResponseParams:
    alpha = consts.alpha_grid[rng.choice(len(consts.alpha_grid), p=hyper.pi_alpha)]
    gamma = consts.gamma_grid[rng.choice(len(consts.gamma_grid), p=hyper.pi_gamma)]
    tau = consts.tau_grid[rng.choice(len(consts.tau_grid), p=hyper.pi_tau)]
    prec = rng.gamma(hyper.a, 1.0 / hyper.b)
    return ResponseParams(alpha=alpha, gamma=gamma, tau=tau, sigma=1.0 / np.sqrt(prec))


def _stratified_levels(grid, pmf, n, rng) -> list[float]:
    """Level assignment whose realized counts match the pmf as closely as
    integers allow (largest-remainder allocation), in shuffled order."""
    exact = [p * n for p in pmf]
    counts = [int(e) for e in exact]
    remainders = sorted(range(len(pmf)), key=lambda i: exact[i] - counts[i], reverse=True)
    for i in remainders[: n - sum(counts)]:
        counts[i] += 1
    levels = [g for g, c in zip(grid, counts) for _ in range(c)]
    rng.shuffle(levels)
    return levels


def simulate_cohort(
    hyper: Hyperparams,
    consts: ModelConstants,
    n_patients: int,
    n_cycles: int,
    dose: float,
    times: list[float],
    w0: float,
    seed: int,
    sigma_override: float | None = None,
    stratified: bool = False,
) -> tuple[list[PatientRecord], list[ResponseParams]]:
    """Cohort drawn from known hyperparameters. sigma_override pins the
    noise scale instead of drawing it from the Gamma prior; stratified
    pins the realized level proportions to the pmfs instead of drawing
    them, which makes small cohorts representative of the population."""
    rng = stream_for(seed, "cohort")
    if stratified:
        alphas = _stratified_levels(consts.alpha_grid, hyper.pi_alpha, n_patients, rng)
        gammas = _stratified_levels(consts.gamma_grid, hyper.pi_gamma, n_patients, rng)
        taus = _stratified_levels(consts.tau_grid, hyper.pi_tau, n_patients, rng)
    records, truths = [], []
    for i in range(1, n_patients + 1):
        p = draw_params(hyper, consts, rng)
        if stratified:
            p = ResponseParams(alphas[i - 1], gammas[i - 1], taus[i - 1], p.sigma)
        if sigma_override is not None:
            p = ResponseParams(p.alpha, p.gamma, p.tau, sigma_override)
        rec = simulate_record(f"p{i:02d}", p, consts, [dose] * n_cycles, times, w0, rng)
        records.append(rec)
        truths.append(p)
    return records, truths
