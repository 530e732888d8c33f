"""Command-line interface mirroring the four monitoring steps:
popfit, collapse, update, predict, plus diagnose and serve.

Exit codes: 0 success, 1 usage, 2 data error, 3 numeric/capability error.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import click

from .errors import CapabilityError, ConfigError, ContractError, DataError, StructuralError
from .inference import (
    DosePlan,
    PlanCycle,
    case_update,
    collapse as collapse_op,
    population_update,
    predict as predict_op,
    record_prefix,
    trace_diagnostics,
)
from .iolib.config import AppConfig, load_config
from .iolib.patientdb import db_digest, load_patient_db
from .iolib.samples import (
    load_case_posterior,
    load_case_prior,
    load_population,
    load_samples,
    save_case_posterior,
    save_case_prior,
    save_cloud_csv,
    save_population,
)

log = logging.getLogger("cytomon")


def _config(path: str | None, seed: int | None) -> AppConfig:
    cfg = load_config(path)
    if seed is not None:
        cfg = replace(cfg, chain=replace(cfg.chain, seed=seed))
    return cfg


@click.group()
def cli():
    """Bayesian chemotherapy-toxicity monitoring."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")


@cli.command()
@click.argument("db", type=click.Path(exists=True, dir_okay=False))
@click.argument("config", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the config seed.")
def popfit(db, config, output, seed):
    """Fit the population posterior to a patient database."""
    cfg = _config(config, seed)
    records = load_patient_db(db)
    if not records:
        raise DataError(f"{db}: no patient records")
    pop = population_update(records, cfg.consts, cfg.hyper, cfg.chain, db_digest=db_digest(db))
    save_population(pop, output)
    click.echo(f"fitted population posterior: {len(pop.draws)} draws from {len(records)} patients")


@cli.command("collapse")
@click.argument("population", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("-L", "--count", type=int, default=10_000, show_default=True)
@click.option("--method", type=click.Choice(["closed_form", "sampled"]), default="closed_form")
@click.option("--seed", type=int, default=0)
def collapse_cmd(population, output, count, method, seed):
    """Collapse a population posterior into a new-case prior."""
    pop = load_population(population)
    prior = collapse_op(pop, count=count, method=method, seed=seed)
    save_case_prior(prior, output)
    click.echo(f"case prior: alpha pmf {tuple(round(p, 4) for p in prior.pmf_alpha)}")


def _parse_cycles(spec: str) -> int:
    """'1..3' or '3' -> number of leading cycles to condition on."""
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            if int(lo) != 1:
                raise click.UsageError("cycle ranges must start at 1")
            return int(hi)
        return int(spec)
    except ValueError:
        raise click.UsageError(f"bad --cycles value {spec!r}")


@cli.command()
@click.argument("prior", type=click.Path(exists=True, dir_okay=False))
@click.argument("db", type=click.Path(exists=True, dir_okay=False))
@click.option("--patient", required=True, help="Target patient id.")
@click.option("--cycles", default=None, help="Data window, e.g. 1..2 (default: all cycles).")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--seed", type=int, default=None)
def update(prior, db, patient, cycles, output, config, seed):
    """Case-specific update: condition the collapsed prior on the target
    patient's observed cycles."""
    cfg = _config(config, seed)
    case_prior = load_case_prior(prior)
    records = {r.patient_id: r for r in load_patient_db(db)}
    if patient not in records:
        raise DataError(f"patient {patient!r} not found in {db}")
    record = records[patient]
    if cycles is not None:
        record = record_prefix(record, _parse_cycles(cycles))
    if not any(c.times for c in record.cycles):
        log.warning("no observations in the selected window; posterior equals the prior")
    post = case_update(case_prior, record, cfg.consts, cfg.chain)
    save_case_posterior(post, output)
    click.echo(
        f"posterior over cycles {list(post.data_window)}: "
        f"alpha pmf {tuple(round(p, 4) for p in post.marginals['alpha'])}"
    )


def _load_plan(path: str) -> DosePlan:
    try:
        raw = json.loads(Path(path).read_text())
        return DosePlan(
            tuple(
                PlanCycle(int(c["cycle_index"]), float(c["dose_std"]), tuple(c["offsets"]))
                for c in raw["cycles"]
            )
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataError(f"{path}: invalid dose plan: {e}")


@cli.command()
@click.argument("posterior", type=click.Path(exists=True, dir_okay=False))
@click.option("--plan", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--noise/--no-noise", default=True, show_default=True)
@click.option(
    "--w0-policy",
    type=click.Choice(["last_observed", "normal"]),
    default="last_observed",
    show_default=True,
)
def predict(posterior, plan, output, config, seed, noise, w0_policy):
    """Simulate predictive log-WBC trajectories under a dose plan."""
    cfg = _config(config, None)
    post = load_case_posterior(posterior)
    dose_plan = _load_plan(plan)
    cloud = predict_op(
        post,
        dose_plan,
        cfg.consts,
        w0_policy=w0_policy,
        seed=seed,
        noise=noise,
        levels=cfg.quantiles,
    )
    save_cloud_csv(cloud, output)
    click.echo(f"cloud: {len(cloud.points)} points over {len(dose_plan.cycles)} cycles")


@cli.command()
@click.argument("samples", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-lag", type=int, default=20, show_default=True)
def diagnose(samples, max_lag):
    """Trace and autocorrelation report for a sample store."""
    store = load_samples(samples)
    report = trace_diagnostics(store, max_lag=max_lag)
    if not report.available:
        click.echo(f"diagnostics unavailable: {report.reason}")
        return
    for name, node in report.nodes.items():
        ac1 = node.autocorr.get(1)
        ac1_s = "n/a" if ac1 is None else f"{ac1:+.3f}"
        click.echo(
            f"{name}: mean {node.running_mean[-1]:.4f}  lag-1 acf {ac1_s}  "
            f"stationary {'yes' if node.stationary else 'NO'}"
        )
    click.echo(f"overall: {'stationary' if report.stationary else 'NOT stationary'}")


@cli.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--population", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--seed", type=int, default=None)
def serve(port, host, config, population, seed):
    """Run the monitoring HTTP service."""
    import uvicorn

    from .service import create_app

    cfg = _config(config, seed)
    pop = load_population(population) if population else None
    uvicorn.run(create_app(cfg, pop), host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as e:
        click.echo(e.format_message(), err=True)
        if e.ctx is not None:
            click.echo(e.ctx.get_usage(), err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    except (DataError, ConfigError, ContractError, StructuralError) as e:
        click.echo(f"error: {e}", err=True)
        return 2
    except (CapabilityError, FloatingPointError, ZeroDivisionError, OverflowError) as e:
        click.echo(f"numeric error: {e}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
