"""Entropy and information gain: classical attribute splits and local/temporal splits.

All logarithms are base 2. Temporal splits are evaluated per instance at that
instance's *current* interval, which after an existential split is its own
witness rather than a shared node interval.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .dataio import StaticTable
from .hs import SatTable, Timeline, build_sat_table
from .intervals import RELATIONS, Interval, Relation

__all__ = [
    "GAIN_TOL",
    "ContractError",
    "ClassDistribution",
    "Condition",
    "SplitCandidate",
    "AnchoringState",
    "NodeDataset",
    "entropy",
    "info",
    "split_local",
    "split_temporal",
    "local_gain",
    "temporal_gain",
    "gain",
    "ClassicalGain",
    "classical_gain",
]

GAIN_TOL = 1e-12


class ContractError(RuntimeError):
    """An operation was called outside its precondition (e.g. on an unanchored dataset)."""


# --- distributions and entropy -------------------------------------------------


@dataclass(frozen=True)
class ClassDistribution:
    """Class counts; zero counts are dropped so equal multisets compare equal."""

    counts: Mapping[str, int]

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("class counts must be nonnegative")
        object.__setattr__(self, "counts", {k: v for k, v in sorted(self.counts.items()) if v})

    @classmethod
    def of(cls, labels: Iterable[str]) -> "ClassDistribution":
        return cls(Counter(labels))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def probabilities(self) -> list[float]:
        n = self.total
        return [v / n for v in self.counts.values()]

    @property
    def is_pure(self) -> bool:
        return len(self.counts) <= 1

    def majority(self) -> str:
        """Most frequent class; ties go to the lexicographically smallest name."""
        if not self.counts:
            raise ValueError("empty distribution has no majority class")
        best = max(self.counts.values())
        return min(k for k, v in self.counts.items() if v == best)

    def __add__(self, other: "ClassDistribution") -> "ClassDistribution":
        return ClassDistribution(Counter(self.counts) + Counter(other.counts))

    def __hash__(self) -> int:
        return hash(tuple(self.counts.items()))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}:{v}" for k, v in self.counts.items()) + "}"


def entropy(probabilities: Sequence[float]) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``."""
    if any(p < 0 for p in probabilities):
        raise ValueError("negative probability")
    if abs(math.fsum(probabilities) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {math.fsum(probabilities)!r}, not 1")
    return -math.fsum(p * math.log2(p) for p in probabilities if p > 0)


def info(dist: ClassDistribution) -> float:
    if dist.total == 0:
        raise ValueError("information of an empty dataset is undefined")
    return entropy(dist.probabilities)


def _weighted_info(parts: Sequence[ClassDistribution]) -> float:
    n = sum(d.total for d in parts)
    return math.fsum(d.total / n * info(d) for d in parts if d.total)


# --- conditions and candidates -------------------------------------------------


@dataclass(frozen=True, order=True)
class Condition:
    """Node test: local ``p`` when ``relation`` is None, else ``<relation>p``."""

    prop: str
    relation: Relation | None = None

    @property
    def is_local(self) -> bool:
        return self.relation is None

    def positive(self) -> str:
        return self.prop if self.relation is None else f"⟨{self.relation}⟩{self.prop}"

    def negative(self) -> str:
        return f"¬{self.prop}" if self.relation is None else f"[{self.relation}]¬{self.prop}"

    def __str__(self) -> str:
        return self.positive()


@dataclass(frozen=True)
class SplitCandidate:
    condition: Condition
    gain: float
    weighted_info: float
    reference: Interval | None = None

    @property
    def relation(self) -> Relation | None:
        return self.condition.relation

    @property
    def prop(self) -> str:
        return self.condition.prop


# --- dataset views -------------------------------------------------------------


class AnchoringState:
    """Per-instance reference interval (set once) and current evaluation interval."""

    __slots__ = ("_reference", "current")

    def __init__(self, reference: Interval | None = None, current: Interval | None = None):
        if (reference is None) != (current is None):
            raise ValueError("current is set iff reference is set")
        self._reference = reference
        self.current = current

    @property
    def reference(self) -> Interval | None:
        return self._reference

    @property
    def anchored(self) -> bool:
        return self._reference is not None

    def anchor(self, i: Interval) -> None:
        if self._reference is not None:
            raise ContractError("reference interval is set only once")
        self._reference = i
        self.current = i

    def moved(self, current: Interval) -> "AnchoringState":
        return AnchoringState(self._reference, current)

    def copy(self) -> "AnchoringState":
        return AnchoringState(self._reference, self.current)

    def __repr__(self) -> str:
        return f"AnchoringState(reference={self._reference}, current={self.current})"


@dataclass
class NodeDataset:
    """The instances reaching one tree node, with their anchoring states.

    ``tables`` is a cache of satisfaction tables keyed by timeline id, shared
    between a dataset and the parts split off from it.
    """

    timelines: list[Timeline]
    states: list[AnchoringState]
    anchored: bool = False
    tables: dict[str, SatTable] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if len(self.timelines) != len(self.states):
            raise ValueError("one anchoring state per timeline is required")
        flags = {s.anchored for s in self.states}
        if self.anchored and False in flags:
            raise ValueError("anchored dataset with unanchored instances")
        if not self.anchored and True in flags:
            raise ValueError("unanchored dataset with anchored instances")

    @classmethod
    def fresh(cls, timelines: Iterable[Timeline], tables: dict[str, SatTable] | None = None) -> "NodeDataset":
        ts = list(timelines)
        return cls(ts, [AnchoringState() for _ in ts], False, {} if tables is None else tables)

    def __len__(self) -> int:
        return len(self.timelines)

    @property
    def ids(self) -> list[str]:
        return [t.id for t in self.timelines]

    @property
    def distribution(self) -> ClassDistribution:
        return ClassDistribution.of(t.label for t in self.timelines)

    def table(self, t: Timeline) -> SatTable:
        tab = self.tables.get(t.id)
        if tab is None:
            tab = self.tables[t.id] = build_sat_table(t)
        return tab

    def satisfies(self, k: int, cond: Condition) -> bool:
        t, s = self.timelines[k], self.states[k]
        if s.current is None:
            raise ContractError(f"instance {t.id!r} has no current interval (dataset unanchored)")
        return self.table(t).lookup(cond.prop, cond.relation, s.current)

    def subset(self, indices: Sequence[int], states: Sequence[AnchoringState] | None = None,
               anchored: bool | None = None) -> "NodeDataset":
        sts = [self.states[k].copy() for k in indices] if states is None else list(states)
        return NodeDataset([self.timelines[k] for k in indices], sts,
                           self.anchored if anchored is None else anchored, self.tables)

    def partition(self, cond: Condition) -> tuple[list[int], list[int]]:
        self._require_anchored()
        left, right = [], []
        for k in range(len(self)):
            (left if self.satisfies(k, cond) else right).append(k)
        return left, right

    def _require_anchored(self) -> None:
        if not self.anchored or any(not s.anchored for s in self.states):
            raise ContractError("split evaluation requires an anchored dataset")


# --- splits and gains ----------------------------------------------------------


def split_local(ds: NodeDataset, p: str) -> tuple[NodeDataset, NodeDataset]:
    left, right = ds.partition(Condition(p))
    return ds.subset(left), ds.subset(right)


def split_temporal(ds: NodeDataset, X: Relation, p: str) -> tuple[NodeDataset, NodeDataset]:
    """``<X>p`` versus ``[X]~p``; current intervals are left unchanged here."""
    left, right = ds.partition(Condition(p, X))
    return ds.subset(left), ds.subset(right)


def _score(ds: NodeDataset, cond: Condition) -> float:
    left, right = ds.partition(cond)
    labels = [t.label for t in ds.timelines]
    return _weighted_info([ClassDistribution.of(labels[k] for k in left),
                           ClassDistribution.of(labels[k] for k in right)])


def local_gain(ds: NodeDataset, p: str) -> float:
    return info(ds.distribution) - _score(ds, Condition(p))


def temporal_gain(ds: NodeDataset, p: str,
                  relations: Sequence[Relation] = RELATIONS) -> tuple[Relation, float]:
    """Best relation for ``<X>p`` (ties: canonical relation order) and its gain."""
    ds._require_anchored()
    order = [r for r in RELATIONS if r in set(relations)]
    if not order:
        raise ValueError("relation set must be nonempty")
    best_r, best_w = order[0], _score(ds, Condition(p, order[0]))
    for r in order[1:]:
        w = _score(ds, Condition(p, r))
        if w < best_w - GAIN_TOL:
            best_r, best_w = r, w
    return best_r, info(ds.distribution) - best_w


def gain(ds: NodeDataset, p: str, relations: Sequence[Relation] = RELATIONS) -> SplitCandidate:
    """The better of the local and the best temporal split on ``p``; local wins ties."""
    parent = info(ds.distribution)
    w_local = _score(ds, Condition(p))
    r, g_temp = temporal_gain(ds, p, relations)
    if g_temp > parent - w_local + GAIN_TOL:
        return SplitCandidate(Condition(p, r), g_temp, parent - g_temp)
    return SplitCandidate(Condition(p), parent - w_local, w_local)


# --- classical attribute-value gain ---------------------------------------------


@dataclass(frozen=True)
class ClassicalGain:
    attribute: str
    gain: float
    info_att: float
    threshold: Any = None  # set for numerical attributes


def _is_numeric(values: Sequence[Any]) -> bool:
    return all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)


def classical_gain(table: StaticTable, attribute: str) -> ClassicalGain:
    """Gain of an attribute: multiway for categorical, best ``<=`` threshold for numerical."""
    rows, labels = table.rows, table.labels
    if not rows:
        raise ValueError("dataset must be nonempty")
    values = [r[attribute] for r in rows]
    parent = info(ClassDistribution.of(labels))
    if _is_numeric(values):
        distinct = sorted(set(values))
        if len(distinct) == 1:
            return ClassicalGain(attribute, 0.0, parent, distinct[0])
        best_w, best_t = math.inf, None
        for a in distinct[:-1]:
            w = _weighted_info([
                ClassDistribution.of(c for v, c in zip(values, labels) if v <= a),
                ClassDistribution.of(c for v, c in zip(values, labels) if v > a),
            ])
            if w < best_w - GAIN_TOL:
                best_w, best_t = w, a
        return ClassicalGain(attribute, parent - best_w, best_w, best_t)
    groups: dict[Any, list[str]] = {}
    for v, c in zip(values, labels):
        groups.setdefault(v, []).append(c)
    w = _weighted_info([ClassDistribution.of(g) for g in groups.values()])
    return ClassicalGain(attribute, parent - w, w)
