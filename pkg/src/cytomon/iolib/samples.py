"""Persistence for sample stores, collapsed priors, case posteriors, and
predictive clouds.

Sample stores use a line-oriented text format with a versioned header:

    #cytomon-samples v1
    #meta {...json: burn_in, thin, seed, sweep_count, digest, layout...}
    #columns a<TAB>b<TAB>pi_alpha[0]<TAB>...
    <one tab-separated row of repr() floats per retained draw>

repr() round-trips doubles exactly, so save followed by load is the
identity. Files are written atomically (temp + rename).
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict
from pathlib import Path

from ..errors import DataError, FormatVersionError
from ..graph import ChainConfig, SampleStore
from ..inference import CasePosterior, CasePrior, PopulationPosterior, PredictiveCloud

log = logging.getLogger(__name__)

MAGIC = "#cytomon-samples"
VERSION = "v1"


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def _columns(store: SampleStore) -> tuple[list[str], dict[str, int]]:
    cols: list[str] = []
    layout: dict[str, int] = {}
    if store.draws:
        first = store.draws[0]
    else:
        first = {n: 0.0 for n in store.node_ids}
    for node in store.node_ids:
        v = first[node]
        if isinstance(v, tuple):
            layout[node] = len(v)
            cols.extend(f"{node}[{i}]" for i in range(len(v)))
        else:
            layout[node] = 0
            cols.append(node)
    return cols, layout


def save_samples(store: SampleStore, path: str | Path) -> None:
    path = Path(path)
    cols, layout = _columns(store)
    meta = {
        "burn_in": store.burn_in,
        "thin": store.thin,
        "seed": store.rng_seed,
        "sweep_count": store.sweep_count,
        "digest": store.digest,
        "layout": layout,
        "node_ids": list(store.node_ids),
    }
    lines = [f"{MAGIC} {VERSION}", "#meta " + json.dumps(meta), "#columns " + "\t".join(cols)]
    for d in store.draws:
        row: list[str] = []
        for node in store.node_ids:
            v = d[node]
            if isinstance(v, tuple):
                row.extend(repr(float(x)) for x in v)
            else:
                row.append(repr(float(v)))
        lines.append("\t".join(row))
    _atomic_write(path, "\n".join(lines) + "\n")


def load_samples(path: str | Path, expected_digest: str | None = None) -> SampleStore:
    path = Path(path)
    data = path.read_text()
    offset = 0
    lines = data.splitlines(keepends=True)

    def fail(msg: str):
        raise DataError(f"{path}: {msg} at byte offset {offset}")

    if not lines or not lines[0].startswith(MAGIC):
        fail("not a cytomon samples file")
    version = lines[0].split()[-1]
    if version != VERSION:
        raise FormatVersionError(
            f"{path}: format version {version} is incompatible with {VERSION}"
        )
    offset += len(lines[0].encode())
    if len(lines) < 3 or not lines[1].startswith("#meta ") or not lines[2].startswith("#columns"):
        fail("truncated header")
    try:
        meta = json.loads(lines[1][len("#meta ") :])
    except json.JSONDecodeError:
        fail("unparseable metadata")
    offset += len(lines[1].encode())
    cols = lines[2][len("#columns ") :].rstrip("\n").split("\t") if lines[2].strip() != "#columns" else []
    offset += len(lines[2].encode())

    node_ids = tuple(meta["node_ids"])
    layout = meta["layout"]
    width = sum(max(layout[n], 1) for n in node_ids)
    draws = []
    for line in lines[3:]:
        stripped = line.rstrip("\n")
        if not stripped:
            offset += len(line.encode())
            continue
        parts = stripped.split("\t")
        if len(parts) != width:
            fail(f"row has {len(parts)} fields, expected {width}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            fail("non-numeric field")
        d = {}
        pos = 0
        for node in node_ids:
            k = layout[node]
            if k == 0:
                d[node] = vals[pos]
                pos += 1
            else:
                d[node] = tuple(vals[pos : pos + k])
                pos += k
        draws.append(d)
        offset += len(line.encode())
    digest = meta.get("digest")
    if expected_digest is not None and digest is not None and expected_digest != digest:
        log.warning(
            "%s: sample store digest %s does not match database digest %s; "
            "these samples were fitted against a different database",
            path,
            digest,
            expected_digest,
        )
    return SampleStore(
        node_ids=node_ids,
        draws=tuple(draws),
        burn_in=meta["burn_in"],
        thin=meta["thin"],
        rng_seed=meta["seed"],
        sweep_count=meta["sweep_count"],
        digest=digest,
    )


# -- population posterior -------------------------------------------------


def save_population(pop: PopulationPosterior, path: str | Path) -> None:
    store = SampleStore(
        node_ids=("pi_alpha", "pi_gamma", "pi_tau", "a", "b"),
        draws=pop.draws,
        burn_in=pop.chain.burn_in,
        thin=pop.chain.thin,
        rng_seed=pop.chain.seed,
        sweep_count=pop.chain.sweeps,
        digest=pop.db_digest,
    )
    save_samples(store, path)


def load_population(path: str | Path, expected_digest: str | None = None) -> PopulationPosterior:
    store = load_samples(path, expected_digest)
    chain = ChainConfig(
        sweeps=store.sweep_count,
        burn_in=store.burn_in,
        thin=store.thin,
        seed=store.rng_seed,
        monitored=store.node_ids,
    )
    return PopulationPosterior(draws=store.draws, chain=chain, db_digest=store.digest)


# -- case prior / posterior ----------------------------------------------


def save_case_prior(prior: CasePrior, path: str | Path) -> None:
    _atomic_write(Path(path), json.dumps(asdict(prior), indent=2) + "\n")


def load_case_prior(path: str | Path) -> CasePrior:
    try:
        raw = json.loads(Path(path).read_text())
        return CasePrior(
            tuple(raw["pmf_alpha"]),
            tuple(raw["pmf_gamma"]),
            tuple(raw["pmf_tau"]),
            float(raw["a"]),
            float(raw["b"]),
            int(raw["draw_count"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataError(f"{path}: invalid case prior file: {e}")


def save_case_posterior(post: CasePosterior, path: str | Path) -> None:
    doc = {
        "draws": list(post.draws),
        "marginals": {k: list(v) for k, v in post.marginals.items()},
        "data_window": list(post.data_window),
        "prior": asdict(post.prior),
        "last_w0": post.last_w0,
        "seed": post.seed,
    }
    _atomic_write(Path(path), json.dumps(doc) + "\n")


def load_case_posterior(path: str | Path) -> CasePosterior:
    try:
        raw = json.loads(Path(path).read_text())
        prior = CasePrior(
            tuple(raw["prior"]["pmf_alpha"]),
            tuple(raw["prior"]["pmf_gamma"]),
            tuple(raw["prior"]["pmf_tau"]),
            float(raw["prior"]["a"]),
            float(raw["prior"]["b"]),
            int(raw["prior"]["draw_count"]),
        )
        return CasePosterior(
            draws=tuple(raw["draws"]),
            marginals={k: tuple(v) for k, v in raw["marginals"].items()},
            data_window=tuple(raw["data_window"]),
            prior=prior,
            last_w0=float(raw["last_w0"]),
            seed=int(raw["seed"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataError(f"{path}: invalid case posterior file: {e}")


# -- predictive cloud -----------------------------------------------------


def save_cloud_csv(cloud: PredictiveCloud, path: str | Path) -> None:
    """Cloud points plus quantile bands: rows kind=point carry simulated
    values, rows kind=quantile carry one band level each."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "cycle_index", "t_offset", "level", "value"])
        for cyc, t, v in cloud.points:
            w.writerow(["point", cyc, repr(t), "", repr(v)])
        for (cyc, t), qs in cloud.quantiles.items():
            for lv in sorted(qs):
                w.writerow(["quantile", cyc, repr(t), repr(lv), repr(qs[lv])])
    tmp.replace(path)
