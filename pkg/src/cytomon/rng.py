"""Reproducible random streams.

Stream derivation rule: the stream for a node is
``default_rng(SeedSequence([chain_seed, stable_hash(node_id)]))`` where
``stable_hash`` is the first 8 bytes of SHA-256 of the UTF-8 id. The rule
is independent of insertion order and Python's hash randomization, so a
given (seed, node id) pair always yields the same stream.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stable_hash(name: str) -> int:
    """First 8 bytes of SHA-256 of the name, as an unsigned integer."""
    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")


def stream_for(seed: int, name: str) -> np.random.Generator:
    """Derive the named substream of a chain-level seed."""
    return np.random.default_rng(np.random.SeedSequence([seed, stable_hash(name)]))


class StreamRegistry:
    """Per-name generator cache for one chain seed."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._streams: dict[str, np.random.Generator] = {}

    def get(self, name: str) -> np.random.Generator:
        g = self._streams.get(name)
        if g is None:
            g = stream_for(self.seed, name)
            self._streams[name] = g
        return g
