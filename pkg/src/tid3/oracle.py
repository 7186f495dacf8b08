"""Brute-force reference computations for checking the learner.

Nothing here reuses the interval, model-checking or gain code of the fast
path: relations are classified from endpoint comparisons, truth is decided by
scanning the valuation, and entropy is recomputed from raw counts. Agreement
between the two routes is therefore evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .policy import choose_witness

__all__ = [
    "OracleRefusal",
    "CandidateRow",
    "CandidateTable",
    "relation_of",
    "brute_force_candidates",
    "brute_force_anchored",
    "tie_break_key",
    "verify_tree",
]

CANDIDATE_LIMIT = 10**6
_ORDER = ("A", "L", "B", "E", "D", "O", "Ai", "Li", "Bi", "Ei", "Di", "Oi")

# sign(x-x'), sign(x-y'), sign(y-x'), sign(y-y') for [x,y] against [x',y']
_SIGNATURES = {
    (-1, -1, 0, -1): "A",
    (-1, -1, -1, -1): "L",
    (0, -1, 1, 1): "B",
    (-1, -1, 1, 0): "E",
    (-1, -1, 1, 1): "D",
    (-1, -1, 1, -1): "O",
    (1, 0, 1, 1): "Ai",
    (1, 1, 1, 1): "Li",
    (0, -1, 1, -1): "Bi",
    (1, -1, 1, 0): "Ei",
    (1, -1, 1, -1): "Di",
    (1, -1, 1, 1): "Oi",
}


class OracleRefusal(RuntimeError):
    """The requested enumeration exceeds the candidate guard."""


def _sgn(v: int) -> int:
    return (v > 0) - (v < 0)


def relation_of(i: tuple[int, int], j: tuple[int, int]) -> str | None:
    """The Allen relation ``i R j`` as a tag, or None when ``i == j``."""
    (x, y), (x2, y2) = i, j
    return _SIGNATURES.get((_sgn(x - x2), _sgn(x - y2), _sgn(y - x2), _sgn(y - y2)))


def _events(t: Any) -> dict[str, list[tuple[int, int]]]:
    return {p: sorted((iv.start, iv.end) for iv in ivs) for p, ivs in t.valuation.items()}


def _truth(events: Mapping[str, list[tuple[int, int]]], prop: str, kind: str, at: tuple[int, int]) -> bool:
    evs = events.get(prop, [])
    if kind == "local":
        return at in evs
    return any(relation_of(at, j) == kind for j in evs)


def _witnesses(events: Mapping[str, list[tuple[int, int]]], prop: str, kind: str,
               at: tuple[int, int]) -> list[tuple[int, int]]:
    return sorted(j for j in events.get(prop, []) if relation_of(at, j) == kind)


def _info(labels: Sequence[str]) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    counts: dict[str, int] = {}
    for c in labels:
        counts[c] = counts.get(c, 0) + 1
    return sum(c / n * math.log2(n / c) for c in counts.values())


def _split_gain(labels: Sequence[str], mask: Sequence[bool]) -> float:
    n = len(labels)
    a = [c for c, m in zip(labels, mask) if m]
    b = [c for c, m in zip(labels, mask) if not m]
    return _info(labels) - (len(a) / n * _info(a) + len(b) / n * _info(b))


@dataclass(frozen=True)
class CandidateRow:
    reference: tuple[int, int] | None
    kind: str  # "local" or a relation tag
    prop: str
    gain: float
    left: tuple[str, ...]
    right: tuple[str, ...]

    @property
    def n_left(self) -> int:
        return len(self.left)

    @property
    def n_right(self) -> int:
        return len(self.right)


def tie_break_key(row: CandidateRow) -> tuple:
    """Ordering after gain: reference, local before temporal, relation order, proposition."""
    ref = row.reference if row.reference is not None else (-(10**9), -(10**9))
    kind = -1 if row.kind == "local" else _ORDER.index(row.kind)
    return (ref, kind, row.prop)


@dataclass
class CandidateTable:
    rows: list[CandidateRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def max_gain(self) -> float:
        """Best gain, or 0.0 when there is nothing to split on."""
        return max((r.gain for r in self.rows), default=0.0)

    def tie_set(self, tol: float = 1e-12) -> list[CandidateRow]:
        top = self.max_gain
        return sorted((r for r in self.rows if r.gain >= top - tol), key=tie_break_key)

    def best(self, tol: float = 1e-12) -> CandidateRow:
        if not self.rows:
            raise ValueError("no candidates to choose from")
        return self.tie_set(tol)[0]

    def find(self, reference: tuple[int, int] | None, kind: str, prop: str) -> CandidateRow:
        for r in self.rows:
            if (r.reference, r.kind, r.prop) == (reference, kind, prop):
                return r
        raise KeyError((reference, kind, prop))


def _kinds(relations: Iterable[Any] | None) -> list[str]:
    allowed = set(_ORDER) if relations is None else {getattr(r, "value", r) for r in relations}
    return ["local"] + [k for k in _ORDER if k in allowed]


def _bounds(ds: Any, extend: bool) -> tuple[int, int]:
    lo, hi = 0, ds.domain_length - 1
    if extend:
        lo, hi = lo - 2, hi + 2
    return lo, hi


def _config(cfg: Any) -> tuple[list[str], bool]:
    if cfg is None:
        return _kinds(None), True
    return _kinds(cfg.relations), bool(cfg.extend_domain)


def brute_force_candidates(ds: Any, cfg: Any = None, vocabulary: Sequence[str] | None = None) -> CandidateTable:
    """Score every (reference interval, test kind, proposition) on an unanchored dataset."""
    kinds, extend = _config(cfg)
    extend = extend or bool(getattr(ds, "extension_applied", False))
    lo, hi = _bounds(ds, extend)
    refs = [(x, y) for x in range(lo, hi + 1) for y in range(x + 1, hi + 1)]
    props = sorted(vocabulary if vocabulary is not None else {p for t in ds.timelines for p in t.valuation})
    count = len(refs) * len(kinds) * len(props)
    if count > CANDIDATE_LIMIT:
        raise OracleRefusal(f"{count} candidates exceed the limit of {CANDIDATE_LIMIT}")
    ids = [t.id for t in ds.timelines]
    labels = [t.label for t in ds.timelines]
    evs = [_events(t) for t in ds.timelines]
    table = CandidateTable()
    for ref in refs:
        for kind in kinds:
            for p in props:
                mask = [_truth(e, p, kind, ref) for e in evs]
                table.rows.append(CandidateRow(
                    ref, kind, p, _split_gain(labels, mask),
                    tuple(i for i, m in zip(ids, mask) if m),
                    tuple(i for i, m in zip(ids, mask) if not m),
                ))
    return table


def brute_force_anchored(instances: Sequence[tuple[Any, tuple[int, int]]], cfg: Any = None,
                         vocabulary: Sequence[str] | None = None) -> CandidateTable:
    """Score every (test kind, proposition) given each timeline's current interval."""
    kinds, _ = _config(cfg)
    props = sorted(vocabulary if vocabulary is not None else {p for t, _ in instances for p in t.valuation})
    ids = [t.id for t, _ in instances]
    labels = [t.label for t, _ in instances]
    evs = [_events(t) for t, _ in instances]
    table = CandidateTable()
    for kind in kinds:
        for p in props:
            mask = [_truth(e, p, kind, tuple(cur)) for e, (_, cur) in zip(evs, instances)]
            table.rows.append(CandidateRow(
                None, kind, p, _split_gain(labels, mask),
                tuple(i for i, m in zip(ids, mask) if m),
                tuple(i for i, m in zip(ids, mask) if not m),
            ))
    return table


# --- tree verification ---------------------------------------------------------------


def _verify_static(tree: Any, table: Any) -> dict[str, Any]:
    from .static import predict_static

    preds = [predict_static(tree, r) for r in table.rows]
    hits = sum(p == c for p, c in zip(preds, table.labels))
    return {
        "kind": "static",
        "n": len(table.rows),
        "training_accuracy": hits / len(table.rows),
        "replay_mismatches": [],
        "gain_discrepancies": [],
        "ok": True,
    }


def verify_tree(tree: Any, ds: Any, tol: float = 1e-9) -> dict[str, Any]:
    """Replay ``ds`` through ``tree`` independently and cross-check it.

    The report lists nodes whose recorded gain differs from a recomputation
    by more than ``tol`` and instances whose ``classify`` route differs from the
    leaf they populated in training (or from this module's own routing).
    """
    from .model import Internal, Leaf, classify

    if not hasattr(tree, "root"):
        return _verify_static(tree, ds)

    lo, hi = _bounds(ds, tree.extended or bool(getattr(ds, "extension_applied", False)))
    cfg = tree.config

    # own routing: (timeline, current) pairs pushed down the tree
    routes: dict[str, str] = {}
    discrepancies: list[dict[str, Any]] = []

    def walk(node: Any, path: str, items: list[tuple[Any, tuple[int, int] | None]]) -> None:
        if isinstance(node, Leaf):
            for t, _ in items:
                routes[t.id] = path
            return
        if node.reference is not None:
            ref = (node.reference.start, node.reference.end)
            inside = lo <= ref[0] and ref[1] <= hi
            items = [(t, ref if inside else None) for t, _ in items]
        c = node.condition
        kind = "local" if c.relation is None else c.relation.value
        left, right, mask = [], [], []
        for t, cur in items:
            ok = False
            nxt = cur
            if cur is not None:
                e = _events(t)
                if kind == "local":
                    ok = _truth(e, c.prop, kind, cur)
                else:
                    ws = _witnesses(e, c.prop, kind, cur)
                    if ws:
                        ok = True
                        nxt = choose_witness(ws, cfg.witness_policy, cfg.seed, path, t.id)
            mask.append(ok)
            (left if ok else right).append((t, nxt))
        if items:
            g = _split_gain([t.label for t, _ in items], mask)
            if abs(g - node.gain) > tol:
                discrepancies.append({"node": path or "root", "recorded": node.gain, "recomputed": g})
        walk(node.left, path + "0", left)
        walk(node.right, path + "1", right)

    walk(tree.root, "", [(t, None) for t in ds.timelines])

    from .learner import prepare

    prepared = prepare(ds, tree)
    member_leaf = {m: p for p, leaf in tree.leaves() for m in leaf.members}
    mismatches = []
    hits = 0
    for t in prepared.timelines:
        pred = classify(tree, t)
        hits += pred.label == t.label
        expected = member_leaf.get(t.id, routes.get(t.id))
        if pred.leaf != expected or pred.leaf != routes.get(t.id):
            mismatches.append({"id": t.id, "classify": pred.leaf, "training": expected,
                               "oracle": routes.get(t.id)})
    return {
        "kind": "temporal",
        "n": len(prepared),
        "training_accuracy": hits / len(prepared),
        "replay_mismatches": mismatches,
        "gain_discrepancies": discrepancies,
        "ok": not mismatches and not discrepancies,
    }
