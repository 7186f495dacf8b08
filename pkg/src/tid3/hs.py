"""Model checking of the HS fragment used by tree nodes: ``p``, ``<X>p``, ``[X]~p``.

A :class:`Timeline` is a finite interval model with a class label. Truth is
evaluated on single intervals. :func:`build_sat_table` precomputes every
``(proposition, test kind, interval)`` cell so that split search does table
lookups instead of scanning witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .intervals import (
    RELATIONS,
    Domain,
    Interval,
    Relation,
    interval_rank,
    relates,
    relation_matrices,
)

__all__ = [
    "Timeline",
    "SatTable",
    "LOCAL",
    "N_KINDS",
    "kind_index",
    "holds_local",
    "holds_diamond",
    "holds_box_neg",
    "witnesses",
    "build_sat_table",
]

#: test-kind index of the local test; relation ``r`` has kind ``r.index + 1``
LOCAL = 0
N_KINDS = 1 + len(RELATIONS)


def kind_index(relation: Relation | None) -> int:
    return LOCAL if relation is None else relation.index + 1


@dataclass(frozen=True)
class Timeline:
    id: str
    domain: Domain
    valuation: Mapping[str, frozenset[Interval]]
    label: str

    def __post_init__(self) -> None:
        val = {}
        for prop, ivs in self.valuation.items():
            if not prop:
                raise ValueError(f"timeline {self.id!r}: empty proposition name")
            ivs = frozenset(ivs)
            for i in ivs:
                if not self.domain.contains(i):
                    raise ValueError(f"timeline {self.id!r}: {prop} {i} outside domain {self.domain}")
            val[prop] = ivs
        object.__setattr__(self, "valuation", val)

    @property
    def propositions(self) -> tuple[str, ...]:
        return tuple(sorted(self.valuation))

    def intervals_of(self, prop: str) -> frozenset[Interval]:
        return self.valuation.get(prop, frozenset())

    def with_domain(self, domain: Domain) -> "Timeline":
        return Timeline(self.id, domain, self.valuation, self.label)


def holds_local(t: Timeline, p: str, i: Interval) -> bool:
    return i in t.intervals_of(p)


def witnesses(t: Timeline, X: Relation, p: str, i: Interval) -> list[Interval]:
    """All intervals ``j`` with ``i R_X j`` where ``p`` holds, in lexicographic order."""
    return sorted(j for j in t.intervals_of(p) if t.domain.contains(j) and relates(i, j, X))


def holds_diamond(t: Timeline, X: Relation, p: str, i: Interval) -> bool:
    return any(t.domain.contains(j) and relates(i, j, X) for j in t.intervals_of(p))


def holds_box_neg(t: Timeline, X: Relation, p: str, i: Interval) -> bool:
    return not holds_diamond(t, X, p, i)


@dataclass(frozen=True)
class SatTable:
    """Dense truth table ``data[prop, kind, interval_rank]`` for one timeline.

    Kind 0 is the local test, kind ``k >= 1`` is ``<RELATIONS[k-1]>p``.
    Propositions not in ``props`` hold nowhere.
    """

    domain: Domain
    props: tuple[str, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pindex", {p: k for k, p in enumerate(self.props)})

    def lookup(self, prop: str, relation: Relation | None, i: Interval) -> bool:
        k = self._pindex.get(prop)  # type: ignore[attr-defined]
        if k is None:
            return False
        return bool(self.data[k, kind_index(relation), interval_rank(i, self.domain)])


def local_vector(t: Timeline, p: str) -> np.ndarray:
    vec = np.zeros(t.domain.n_intervals, dtype=bool)
    for i in t.intervals_of(p):
        vec[interval_rank(i, t.domain)] = True
    return vec


def build_sat_table(t: Timeline, props: Iterable[str] | None = None) -> SatTable:
    """Precompute ``p`` and ``<X>p`` for every proposition, relation and interval.

    ``props`` fixes the proposition axis (default: the timeline's own
    propositions, sorted); names absent from the timeline get all-false rows.
    """
    props = tuple(t.propositions if props is None else props)
    rel = relation_matrices(t.domain)
    m = t.domain.n_intervals
    data = np.zeros((len(props), N_KINDS, m), dtype=bool)
    for k, p in enumerate(props):
        local = local_vector(t, p)
        if not local.any():
            continue
        data[k, LOCAL] = local
        # <X>p at i  <=>  some j with R_X[i, j] and p at j
        data[k, 1:] = (rel & local[None, None, :]).any(axis=2)
    data.setflags(write=False)
    return SatTable(t.domain, props, data)

