"""Temporal ID3: recursive induction of binary HS decision trees.

Split search is vectorized over a stacked satisfaction tensor
``S[instance, prop, kind, interval]`` (kind 0 = local, kind k = ``<RELATIONS[k-1]>``),
so scoring a node is a handful of array reductions instead of a model-checking
pass per candidate.

Candidates are ranked by gain (ties within ``GAIN_TOL``), then reference
interval (lexicographic, unanchored search only), then local before temporal,
then canonical relation order, then proposition name.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .config import LearnerConfig, StoppingConfig
from .dataio import TemporalDataset, extend_domain
from .hs import LOCAL, N_KINDS, build_sat_table, kind_index, witnesses
from .infogain import (
    GAIN_TOL,
    AnchoringState,
    Condition,
    ContractError,
    NodeDataset,
    SplitCandidate,
)
from .intervals import RELATIONS, Interval, enumerate_intervals, interval_rank
from .model import DecisionTree, Internal, Leaf, Node, classify
from .policy import choose_tied, choose_witness

__all__ = [
    "LearnerConfig",
    "StoppingConfig",
    "CandidateGrid",
    "score_anchored",
    "score_unanchored",
    "find_best_anchored_split",
    "find_best_unanchored_split",
    "assign_reference_interval",
    "split",
    "no_stop",
    "learn",
]

_KIND_CONDS = [None, *RELATIONS]


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Entropy (bits) of each count vector along the last axis; 0 for empty rows."""
    n = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(n > 0, counts / n, 0.0)
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return 0.0 - terms.sum(axis=-1)


def _gains(left: np.ndarray, total: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gain and weighted information of binary splits given left-part class counts."""
    n = total.sum()
    right = total - left
    wl = left.sum(axis=-1) / n
    wr = right.sum(axis=-1) / n
    weighted = wl * _entropy_rows(left) + wr * _entropy_rows(right)
    return _entropy_rows(total) - weighted, weighted


@dataclass(frozen=True)
class CandidateGrid:
    """Every scored candidate of one search, laid out in tie-break order.

    ``gains`` has shape ``(R, K, P)`` for R reference intervals (``R == 1`` and
    ``references == (None,)`` for anchored search), K test kinds, P propositions.
    Disallowed kinds carry ``-inf``.
    """

    gains: np.ndarray
    weighted: np.ndarray
    references: tuple[Interval | None, ...]
    props: tuple[str, ...]

    def candidate(self, flat: int) -> SplitCandidate:
        r, k, p = np.unravel_index(flat, self.gains.shape)
        cond = Condition(self.props[p], _KIND_CONDS[k])
        return SplitCandidate(cond, float(self.gains[r, k, p]), float(self.weighted[r, k, p]), self.references[r])

    def __iter__(self) -> Iterator[SplitCandidate]:
        for flat in range(self.gains.size):
            if np.isfinite(self.gains.flat[flat]):
                yield self.candidate(flat)

    def tie_set(self) -> list[SplitCandidate]:
        flat = self.gains.ravel()
        best = flat.max()
        return [self.candidate(i) for i in np.flatnonzero(flat >= best - GAIN_TOL)]

    def best(self, tie_break: str = "deterministic", seed: int = 0, path: str = "") -> SplitCandidate:
        flat = self.gains.ravel()
        tied = np.flatnonzero(flat >= flat.max() - GAIN_TOL)
        return self.candidate(int(tied[choose_tied(len(tied), tie_break, seed, path)]))


def _vocabulary(ds: NodeDataset, vocabulary: Sequence[str] | None) -> tuple[str, ...]:
    vocab = tuple(sorted(set(vocabulary))) if vocabulary is not None else tuple(
        sorted({p for t in ds.timelines for p in t.valuation})
    )
    if not vocab:
        raise ValueError("no propositions to split on")
    return vocab


def _stack(ds: NodeDataset, vocab: tuple[str, ...]) -> np.ndarray:
    """``S[instance, prop, kind, interval]`` for the node's timelines."""
    if not ds.timelines:
        raise ContractError("cannot search splits on an empty dataset")
    domain = ds.timelines[0].domain
    blocks = []
    for t in ds.timelines:
        if t.domain != domain:
            raise ValueError("all timelines of a node must share one domain")
        tab = ds.tables.get(t.id)
        if tab is None or tab.props != vocab:
            tab = build_sat_table(t, vocab)
            if t.id not in ds.tables:
                ds.tables[t.id] = tab
        blocks.append(tab.data)
    return np.stack(blocks)


def _class_masks(ds: NodeDataset) -> list[np.ndarray]:
    labels = np.array([t.label for t in ds.timelines])
    return [labels == c for c in sorted(set(labels.tolist()))]


def _kind_mask(cfg: LearnerConfig) -> np.ndarray:
    mask = np.zeros(N_KINDS, dtype=bool)
    mask[LOCAL] = True
    for r in cfg.relations:
        mask[kind_index(r)] = True
    return mask


def score_anchored(ds: NodeDataset, cfg: LearnerConfig | None = None,
                   vocabulary: Sequence[str] | None = None) -> CandidateGrid:
    cfg = cfg or LearnerConfig()
    if not ds.anchored or any(not s.anchored for s in ds.states):
        raise ContractError("anchored split search needs an anchored dataset")
    vocab = _vocabulary(ds, vocabulary)
    S = _stack(ds, vocab)
    dom = ds.timelines[0].domain
    cur = np.array([interval_rank(s.current, dom) for s in ds.states])
    vals = S[np.arange(len(ds)), :, :, cur]  # (m, P, K)
    left = np.stack([vals[m].sum(axis=0) for m in _class_masks(ds)], axis=-1)  # (P, K, C)
    total = np.array([m.sum() for m in _class_masks(ds)])
    g, w = _gains(left.transpose(1, 0, 2), total)  # (K, P)
    g = np.where(_kind_mask(cfg)[:, None], g, -np.inf)
    return CandidateGrid(g[None], w[None], (None,), vocab)


def score_unanchored(ds: NodeDataset, cfg: LearnerConfig | None = None,
                     vocabulary: Sequence[str] | None = None) -> CandidateGrid:
    cfg = cfg or LearnerConfig()
    if ds.anchored or any(s.anchored for s in ds.states):
        raise ContractError("unanchored split search needs an unanchored dataset")
    vocab = _vocabulary(ds, vocabulary)
    S = _stack(ds, vocab)  # (m, P, K, M)
    masks = _class_masks(ds)
    left = np.stack([S[m].sum(axis=0) for m in masks], axis=-1)  # (P, K, M, C)
    total = np.array([m.sum() for m in masks])
    g, w = _gains(left.transpose(2, 1, 0, 3), total)  # (M, K, P)
    g = np.where(_kind_mask(cfg)[None, :, None], g, -np.inf)
    refs = tuple(enumerate_intervals(ds.timelines[0].domain))
    return CandidateGrid(g, w, refs, vocab)


def find_best_anchored_split(ds: NodeDataset, cfg: LearnerConfig | None = None,
                             vocabulary: Sequence[str] | None = None, path: str = "") -> SplitCandidate:
    cfg = cfg or LearnerConfig()
    return score_anchored(ds, cfg, vocabulary).best(cfg.tie_break, cfg.seed, path)


def find_best_unanchored_split(ds: NodeDataset, cfg: LearnerConfig | None = None,
                               vocabulary: Sequence[str] | None = None, path: str = "") -> SplitCandidate:
    """Best candidate over every reference interval of the node's domain.

    The dataset is not modified; the caller anchors it with
    :func:`assign_reference_interval` using the returned ``reference``.
    """
    cfg = cfg or LearnerConfig()
    return score_unanchored(ds, cfg, vocabulary).best(cfg.tie_break, cfg.seed, path)


def assign_reference_interval(ds: NodeDataset, i: Interval) -> None:
    if ds.anchored:
        raise ContractError("dataset already anchored; the reference interval is set only once")
    for s in ds.states:
        s.anchor(i)
    ds.anchored = True


def split(ds: NodeDataset, c: SplitCandidate, cfg: LearnerConfig | None = None,
          path: str = "") -> tuple[NodeDataset, NodeDataset]:
    """Partition by the candidate at each instance's current interval.

    Left instances of a temporal test move to their chosen witness. When the
    candidate came from an unanchored search (``c.reference`` set) the right
    part is returned unanchored again.
    """
    cfg = cfg or LearnerConfig()
    cond = c.condition
    if cond.relation is not None and cond.relation not in cfg.relations:
        raise ValueError(f"relation {cond.relation} is not in the configured relation set")
    left_idx, right_idx = ds.partition(cond)
    left_states = []
    for k in left_idx:
        s = ds.states[k]
        if cond.relation is None:
            left_states.append(s.copy())
        else:
            t = ds.timelines[k]
            ws = witnesses(t, cond.relation, cond.prop, s.current)
            left_states.append(s.moved(choose_witness(ws, cfg.witness_policy, cfg.seed, path, t.id)))
    left = ds.subset(left_idx, left_states, anchored=True)
    if c.reference is not None:
        right = ds.subset(right_idx, [AnchoringState() for _ in right_idx], anchored=False)
    else:
        right = ds.subset(right_idx)
    return left, right


def no_stop(ds: NodeDataset, depth: int, cfg: StoppingConfig, best_gain: float | None = None) -> bool:
    """True while the node should still be split."""
    if len(ds) == 0 or ds.distribution.is_pure:
        return False
    if len(ds) < cfg.min_instances:
        return False
    if cfg.max_depth is not None and depth >= cfg.max_depth:
        return False
    if best_gain is not None and best_gain <= cfg.min_gain:
        return False
    return True


def _leaf(ds: NodeDataset) -> Leaf:
    dist = ds.distribution
    return Leaf(dist.majority(), dist, tuple(ds.ids))


def learn(ds: TemporalDataset, cfg: LearnerConfig | None = None) -> DecisionTree:
    """Learn a temporal decision tree.

    The domain is extended by two points per side first, unless disabled in
    ``cfg`` or already applied.
    """
    cfg = cfg or LearnerConfig()
    if len(ds) == 0:
        raise ValueError("cannot learn from an empty dataset")
    if cfg.extend_domain and not ds.extension_applied:
        ds = extend_domain(ds)
    vocab = ds.vocabulary
    tables = {t.id: build_sat_table(t, vocab) for t in ds.timelines}
    if len(tables) != len(ds):
        raise ValueError("timeline ids must be unique")

    def grow(node: NodeDataset, depth: int, path: str) -> Node:
        if not vocab or not no_stop(node, depth, cfg.stopping):
            return _leaf(node)
        fresh = not node.anchored
        if fresh:
            cand = find_best_unanchored_split(node, cfg, vocab, path)
        else:
            cand = find_best_anchored_split(node, cfg, vocab, path)
        if not no_stop(node, depth, cfg.stopping, cand.gain):
            return _leaf(node)
        dist = node.distribution
        if fresh:
            assign_reference_interval(node, cand.reference)
        left, right = split(node, cand, cfg, path)
        return Internal(
            cand.condition,
            cand.gain,
            dist,
            grow(left, depth + 1, path + "0"),
            grow(right, depth + 1, path + "1"),
            cand.reference if fresh else None,
        )

    root = grow(NodeDataset.fresh(ds.timelines, tables), 0, "")
    return DecisionTree(root, cfg, vocab, ds.classes, ds.extension_applied)


def prepare(ds: TemporalDataset, tree: DecisionTree) -> TemporalDataset:
    """Put a dataset on the same footing (extended or not) as the tree's training data."""
    if tree.extended and not ds.extension_applied:
        return extend_domain(ds)
    return ds


def training_accuracy(tree: DecisionTree, ds: TemporalDataset) -> float:
    ds = prepare(ds, tree)
    hits = sum(classify(tree, t).label == t.label for t in ds.timelines)
    return hits / len(ds)
