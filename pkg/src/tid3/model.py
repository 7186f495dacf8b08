"""Learned temporal decision trees: prediction, rule rendering, persistence, DOT export."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Union

from .config import LearnerConfig
from .hs import Timeline, holds_local, witnesses
from .infogain import ClassDistribution, Condition
from .intervals import Interval, Relation
from .policy import choose_witness

__all__ = [
    "FORMAT_VERSION",
    "TreeFormatError",
    "Leaf",
    "Internal",
    "DecisionTree",
    "Prediction",
    "classify",
    "path_formula",
    "serialize",
    "deserialize",
    "dumps",
    "loads",
    "to_dot",
]

FORMAT_VERSION = 1


class TreeFormatError(ValueError):
    """Malformed tree document; the message starts with the offending node's location."""


@dataclass(frozen=True)
class Leaf:
    label: str
    distribution: ClassDistribution
    members: tuple[str, ...] = ()


@dataclass(frozen=True)
class Internal:
    condition: Condition
    gain: float
    distribution: ClassDistribution
    left: "Node"
    right: "Node"
    reference: Interval | None = None


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class DecisionTree:
    root: Node
    config: LearnerConfig = field(default_factory=LearnerConfig)
    vocabulary: tuple[str, ...] = ()
    classes: tuple[str, ...] = ()
    extended: bool = True

    def nodes(self) -> Iterator[tuple[str, Node]]:
        """Preorder walk yielding ``(path, node)``; paths spell left as 0, right as 1."""
        stack: list[tuple[str, Node]] = [("", self.root)]
        while stack:
            path, node = stack.pop()
            yield path, node
            if isinstance(node, Internal):
                stack.append((path + "1", node.right))
                stack.append((path + "0", node.left))

    def leaves(self) -> list[tuple[str, Leaf]]:
        return [(p, n) for p, n in self.nodes() if isinstance(n, Leaf)]

    def node_at(self, path: str) -> Node:
        node = self.root
        for step in path:
            if not isinstance(node, Internal):
                raise KeyError(f"path {path!r} runs past a leaf")
            node = node.left if step == "0" else node.right
        return node

    @property
    def n_internal(self) -> int:
        return sum(isinstance(n, Internal) for _, n in self.nodes())

    @property
    def depth(self) -> int:
        return max(len(p) for p, _ in self.leaves())


# --- prediction ------------------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    label: str
    distribution: ClassDistribution
    leaf: str
    diagnostics: tuple[str, ...] = ()

    @property
    def confidence(self) -> float:
        return self.distribution.counts.get(self.label, 0) / max(self.distribution.total, 1)


def classify(tree: DecisionTree, t: Timeline) -> Prediction:
    """Route ``t`` from the root, replaying the training-time anchoring.

    A node labelled with a reference interval resets the current interval to
    it. A satisfied temporal test moves the current interval to the witness
    chosen by the tree's witness policy. ``t`` is evaluated over its own
    domain, so callers extend it exactly as the training data was.
    """
    cfg = tree.config
    node, path, current = tree.root, "", None
    notes: list[str] = []
    while isinstance(node, Internal):
        if node.reference is not None:
            if t.domain.contains(node.reference):
                current = node.reference
            else:
                notes.append(f"node {path or 'root'}: reference {node.reference} outside {t.domain}")
                current = None
        ok = False
        if current is not None:
            c = node.condition
            if c.relation is None:
                ok = holds_local(t, c.prop, current)
            else:
                ws = witnesses(t, c.relation, c.prop, current)
                if ws:
                    ok = True
                    current = choose_witness(ws, cfg.witness_policy, cfg.seed, path, t.id)
        node, path = (node.left, path + "0") if ok else (node.right, path + "1")
    return Prediction(node.label, node.distribution, path, tuple(notes))


# --- rules -----------------------------------------------------------------------


def _render(steps: list[tuple[Condition, bool]]) -> str:
    if not steps:
        return ""
    (c, went_left), rest = steps[0], steps[1:]
    tail = _render(rest)
    if went_left and c.relation is not None:
        return c.positive() if not tail else f"⟨{c.relation}⟩({c.prop} ∧ {tail})"
    lit = c.positive() if went_left else c.negative()
    return lit if not tail else f"{lit} ∧ {tail}"


def path_segments(tree: DecisionTree, path: str) -> list[tuple[Interval | None, list[tuple[Condition, bool]]]]:
    """Split a root-to-leaf path into runs sharing one reference interval."""
    segments: list[tuple[Interval | None, list[tuple[Condition, bool]]]] = []
    node = tree.root
    for step in path:
        if not isinstance(node, Internal):
            raise KeyError(f"path {path!r} runs past a leaf")
        if node.reference is not None or not segments:
            segments.append((node.reference, []))
        segments[-1][1].append((node.condition, step == "0"))
        node = node.left if step == "0" else node.right
    if not isinstance(node, Leaf):
        raise KeyError(f"path {path!r} does not end at a leaf")
    return segments


def path_formula(tree: DecisionTree, path: str) -> str:
    """Render the branch ending at leaf ``path`` as ``[x,y] : formula => class``."""
    leaf = tree.node_at(path)
    assert isinstance(leaf, Leaf)
    segs = path_segments(tree, path)
    if not segs:
        return f"⊤ ⇒ {leaf.label}"
    parts = [f"{ref} : {_render(steps)}" if ref is not None else _render(steps) for ref, steps in segs]
    body = parts[0] if len(parts) == 1 else " ∧ ".join(f"({p})" for p in parts)
    return f"{body} ⇒ {leaf.label}"


def rules(tree: DecisionTree) -> list[str]:
    return [path_formula(tree, p) for p, _ in tree.leaves()]


# --- serialization -----------------------------------------------------------------


def _node_doc(node: Node) -> dict[str, Any]:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "class": node.label, "dist": dict(node.distribution.counts),
                "members": list(node.members)}
    c = node.condition
    return {
        "kind": "node",
        "ref": node.reference.to_list() if node.reference is not None else None,
        "cond": {
            "kind": "local" if c.relation is None else "temporal",
            "rel": None if c.relation is None else c.relation.value,
            "prop": c.prop,
        },
        "gain": node.gain,
        "dist": dict(node.distribution.counts),
        "left": _node_doc(node.left),
        "right": _node_doc(node.right),
    }


def serialize(tree: DecisionTree) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "config": tree.config.to_dict(),
        "extended": tree.extended,
        "vocabulary": list(tree.vocabulary),
        "classes": list(tree.classes),
        "root": _node_doc(tree.root),
    }


def dumps(tree: DecisionTree) -> str:
    return json.dumps(serialize(tree), indent=2, ensure_ascii=False) + "\n"


def _fail(loc: str, msg: str) -> None:
    raise TreeFormatError(f"{loc}: {msg}")


def _dist(d: Any, loc: str) -> ClassDistribution:
    if not isinstance(d, Mapping) or not all(
        isinstance(k, str) and isinstance(v, int) and not isinstance(v, bool) and v >= 0 for k, v in d.items()
    ):
        _fail(loc, "dist must map class names to nonnegative integers")
    return ClassDistribution(dict(d))


def _parse_node(d: Any, loc: str, relations: frozenset[Relation]) -> Node:
    if not isinstance(d, Mapping):
        _fail(loc, "node must be an object")
    kind = d.get("kind")
    if kind == "leaf":
        if not isinstance(d.get("class"), str):
            _fail(loc, "leaf needs a class")
        if any(k in d for k in ("left", "right", "children")):
            _fail(loc, "leaf must not have children")
        members = d.get("members", [])
        if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
            _fail(loc, "members must be a list of ids")
        return Leaf(d["class"], _dist(d.get("dist", {}), loc), tuple(members))
    if kind != "node":
        _fail(loc, f"unknown node kind {kind!r}")
    if "children" in d:
        ch = d["children"]
        if not isinstance(ch, list) or len(ch) != 2:
            n = len(ch) if isinstance(ch, list) else "?"
            _fail(loc, f"internal node must have exactly 2 children, found {n}")
        left_doc, right_doc = ch
    else:
        if "left" not in d or "right" not in d:
            _fail(loc, "internal node must have exactly 2 children (left, right)")
        left_doc, right_doc = d["left"], d["right"]
    cond = d.get("cond")
    if not isinstance(cond, Mapping) or not isinstance(cond.get("prop"), str) or not cond["prop"]:
        _fail(loc, "cond needs a prop")
    if cond.get("kind") == "local":
        if cond.get("rel") is not None:
            _fail(loc, "local condition must not carry a relation")
        condition = Condition(cond["prop"])
    elif cond.get("kind") == "temporal":
        try:
            rel = Relation.parse(cond.get("rel"))
        except ValueError as exc:
            raise TreeFormatError(f"{loc}: {exc}") from None
        if rel not in relations:
            _fail(loc, f"relation {rel} not in the configured relation set")
        condition = Condition(cond["prop"], rel)
    else:
        _fail(loc, f"unknown condition kind {cond.get('kind')!r}")
    ref = d.get("ref")
    try:
        reference = None if ref is None else Interval.from_list(ref)
    except (ValueError, TypeError) as exc:
        raise TreeFormatError(f"{loc}: bad ref: {exc}") from None
    g = d.get("gain")
    if not isinstance(g, (int, float)) or isinstance(g, bool):
        _fail(loc, "gain must be a number")
    return Internal(
        condition,
        float(g),
        _dist(d.get("dist", {}), loc),
        _parse_node(left_doc, loc + ".left", relations),
        _parse_node(right_doc, loc + ".right", relations),
        reference,
    )


def deserialize(doc: Any) -> DecisionTree:
    if not isinstance(doc, Mapping):
        raise TreeFormatError("document: must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise TreeFormatError(f"document: unsupported version {doc.get('version')!r}")
    for key in ("config", "root"):
        if key not in doc:
            raise TreeFormatError(f"document: missing {key!r}")
    try:
        cfg = LearnerConfig.from_dict(doc["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise TreeFormatError(f"config: {exc}") from None
    root = _parse_node(doc["root"], "root", frozenset(cfg.relations))
    return DecisionTree(
        root,
        cfg,
        tuple(doc.get("vocabulary", ())),
        tuple(doc.get("classes", ())),
        bool(doc.get("extended", cfg.extend_domain)),
    )


def loads(text: str) -> DecisionTree:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeFormatError(f"document: invalid JSON: {exc}") from None
    return deserialize(doc)


# --- DOT -------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(tree: DecisionTree, name: str = "tid3") -> str:
    ids = {path: f"n{k}" for k, (path, _) in enumerate(tree.nodes())}
    lines = [f"digraph {name} {{", '  node [fontname="Helvetica"];', '  edge [fontname="Helvetica"];']
    edges = []
    for path, node in tree.nodes():
        if isinstance(node, Leaf):
            lines.append(f"  {ids[path]} [shape=ellipse, label={_q(node.label + chr(10) + str(node.distribution))}];")
            continue
        head = f"{node.reference}\n" if node.reference is not None else ""
        lines.append(f"  {ids[path]} [shape=box, label={_q(head + str(node.distribution))}];")
        edges.append(f"  {ids[path]} -> {ids[path + '0']} [label={_q(node.condition.positive())}];")
        edges.append(f"  {ids[path]} -> {ids[path + '1']} [label={_q(node.condition.negative())}];")
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
