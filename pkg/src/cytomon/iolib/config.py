"""Model configuration file: constants, grids, precision-prior grid, chain
defaults, and quantile levels, as a single JSON document."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError
from ..graph import ChainConfig
from ..therapy import HyperPriorConfig, ModelConstants

ENV_CONFIG = "CYTOMON_CONFIG"


@dataclass(frozen=True)
class AppConfig:
    consts: ModelConstants
    hyper: HyperPriorConfig
    chain: ChainConfig
    quantiles: tuple[float, ...] = (5.0, 50.0, 95.0)


def default_config() -> AppConfig:
    return AppConfig(ModelConstants(), HyperPriorConfig(), ChainConfig())


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load configuration, falling back to the CYTOMON_CONFIG environment
    variable and then to built-in defaults. Partial files are merged over
    the defaults; every value is validated before any computation."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return default_config()
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    try:
        c = raw.get("constants", {})
        g = raw.get("grids", {})
        consts = ModelConstants(
            k=float(c.get("k", ModelConstants.k)),
            r=float(c.get("r", ModelConstants.r)),
            alpha_grid=tuple(g.get("alpha", ModelConstants.alpha_grid)),
            gamma_grid=tuple(g.get("gamma", ModelConstants.gamma_grid)),
            tau_grid=tuple(g.get("tau", ModelConstants.tau_grid)),
        )
        p = raw.get("precision_prior", {})
        hyper = HyperPriorConfig(
            dirichlet_conc=tuple(p.get("dirichlet_conc", HyperPriorConfig.dirichlet_conc)),
            a_grid=tuple(p.get("a_grid", HyperPriorConfig.a_grid)),
            b_grid=tuple(p.get("b_grid", HyperPriorConfig.b_grid)),
        )
        ch = raw.get("chain", {})
        chain = ChainConfig(
            sweeps=int(ch.get("sweeps", ChainConfig.sweeps)),
            burn_in=int(ch.get("burn_in", ChainConfig.burn_in)),
            thin=int(ch.get("thin", ChainConfig.thin)),
            seed=int(ch.get("seed", ChainConfig.seed)),
        )
        quantiles = tuple(float(q) for q in raw.get("quantiles", (5.0, 50.0, 95.0)))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"config file {path}: {e}")
    if any(not 0 < q < 100 for q in quantiles) or list(quantiles) != sorted(quantiles):
        raise ConfigError("quantiles must be increasing and strictly between 0 and 100")
    return AppConfig(consts, hyper, chain, quantiles)
