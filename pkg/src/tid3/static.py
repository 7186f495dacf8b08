"""Classical ID3 on attribute-value tables, used as the static baseline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Union

from .dataio import StaticTable
from .infogain import ClassDistribution, classical_gain

__all__ = ["StaticLeaf", "StaticNode", "StaticTree", "learn_static", "predict_static", "static_accuracy"]


@dataclass(frozen=True)
class StaticLeaf:
    label: str
    distribution: ClassDistribution


@dataclass(frozen=True)
class StaticNode:
    attribute: str
    gain: float
    distribution: ClassDistribution
    threshold: Any = None  # numerical split: left is ``<= threshold``
    children: Mapping[Any, "StaticTree"] = field(default_factory=dict)
    default: str = ""


StaticTree = Union[StaticLeaf, StaticNode]


def learn_static(table: StaticTable, max_depth: int | None = None) -> StaticTree:
    """ID3: split on the highest-gain attribute until pure or no gain is left.

    Categorical attributes split multiway and are used once per path;
    numerical attributes split binary at the best threshold. Ties between
    attributes go to the first in ``table.attributes``.
    """
    idx = list(range(len(table.rows)))
    return _grow(table, idx, set(table.attributes), 0, max_depth)


def _grow(table: StaticTable, idx: list[int], free: set[str], depth: int, max_depth: int | None) -> StaticTree:
    labels = [table.labels[k] for k in idx]
    dist = ClassDistribution.of(labels)
    if dist.is_pure or not free or (max_depth is not None and depth >= max_depth):
        return StaticLeaf(dist.majority(), dist)
    sub = StaticTable(table.attributes, tuple(table.rows[k] for k in idx), tuple(labels))
    best = None
    for a in table.attributes:
        if a not in free:
            continue
        g = classical_gain(sub, a)
        if best is None or g.gain > best.gain + 1e-12:
            best = g
    if best is None or best.gain <= 0:
        return StaticLeaf(dist.majority(), dist)
    if best.threshold is not None:
        lo = [k for k in idx if table.rows[k][best.attribute] <= best.threshold]
        hi = [k for k in idx if table.rows[k][best.attribute] > best.threshold]
        children = {"le": _grow(table, lo, free, depth + 1, max_depth),
                    "gt": _grow(table, hi, free, depth + 1, max_depth)}
    else:
        groups: dict[Any, list[int]] = {}
        for k in idx:
            groups.setdefault(table.rows[k][best.attribute], []).append(k)
        rest = free - {best.attribute}
        children = {v: _grow(table, ks, rest, depth + 1, max_depth) for v, ks in sorted(groups.items())}
    return StaticNode(best.attribute, best.gain, dist, best.threshold, children, dist.majority())


def predict_static(tree: StaticTree, row: Mapping[str, Any]) -> str:
    while isinstance(tree, StaticNode):
        v = row[tree.attribute]
        if tree.threshold is not None:
            tree = tree.children["le" if v <= tree.threshold else "gt"]
        elif v in tree.children:
            tree = tree.children[v]
        else:
            return tree.default
    return tree.label


def static_accuracy(tree: StaticTree, table: StaticTable) -> float:
    hits = sum(predict_static(tree, r) == c for r, c in zip(table.rows, table.labels))
    return hits / len(table.rows)
