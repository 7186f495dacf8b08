"""Deterministic and seeded-random choices shared by training and prediction.

Random choices are keyed by ``(seed, node path, timeline id)`` rather than drawn
from a running stream, so the witness picked for a timeline at a node is the
same whether it is computed while learning or while classifying.
"""

from __future__ import annotations

import zlib
from typing import Sequence, TypeVar

import numpy as np

T = TypeVar("T")

DETERMINISTIC = "deterministic"
LEXICOGRAPHIC = "lexicographic"
RANDOM = "random"

TIE_BREAKS = (DETERMINISTIC, RANDOM)
WITNESS_POLICIES = (LEXICOGRAPHIC, RANDOM)


def _rng(seed: int, *keys: str) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFF] + [zlib.crc32(k.encode("utf-8")) for k in keys])


def choose_witness(ws: Sequence[T], policy: str, seed: int, path: str, timeline_id: str) -> T:
    """Pick one witness from a lexicographically sorted, nonempty list."""
    if not ws:
        raise ValueError("no witness to choose from")
    if policy == LEXICOGRAPHIC:
        return ws[0]
    if policy == RANDOM:
        return ws[int(_rng(seed, "witness", path, timeline_id).integers(len(ws)))]
    raise ValueError(f"unknown witness policy {policy!r}")


def choose_tied(n_tied: int, policy: str, seed: int, path: str) -> int:
    """Index into the tie set (already in canonical order) of the winner."""
    if policy == DETERMINISTIC or n_tied == 1:
        return 0
    if policy == RANDOM:
        return int(_rng(seed, "tie", path).integers(n_tied))
    raise ValueError(f"unknown tie-break policy {policy!r}")
