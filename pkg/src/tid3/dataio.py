"""Temporal datasets: loading, validation, domain extension, flattening, synthesis.

The canonical on-disk form is a JSON document::

    {"domain_length": 7,
     "instances": [{"id": "P1", "class": "C1",
                    "events": [{"prop": "fever", "start": 3, "end": 4}, ...]}, ...]}

Event endpoints are inclusive integer points in ``0 .. domain_length-1``.
A flat CSV importer reads the two-table presentation (``instance,prop,start,end``
plus ``instance,class``).
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from .hs import Timeline, holds_diamond
from .intervals import Domain, Interval, Relation, enumerate_intervals, relates

__all__ = [
    "LoadError",
    "TemporalDataset",
    "StaticTable",
    "load",
    "loads",
    "load_path",
    "load_event_tables",
    "dump",
    "dumps",
    "extend_domain",
    "to_static_table",
    "bundled",
    "BUNDLED",
    "PlantedRule",
    "SynthSpec",
    "synth",
    "min_domain_length",
    "NEGATIVE_MODES",
    "parse_rule",
    "rules_from_truth",
    "rule_label",
]

EXTENSION_POINTS = 2
BUNDLED = ("fig2", "fig4")


class LoadError(ValueError):
    """Malformed dataset input; the message names the offending record."""


@dataclass(frozen=True)
class TemporalDataset:
    domain: Domain
    timelines: tuple[Timeline, ...]
    domain_length: int
    extension_applied: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "timelines", tuple(self.timelines))
        for t in self.timelines:
            if t.domain != self.domain:
                raise ValueError(f"timeline {t.id!r} has domain {t.domain}, dataset has {self.domain}")

    def __len__(self) -> int:
        return len(self.timelines)

    def __iter__(self):
        return iter(self.timelines)

    @property
    def vocabulary(self) -> tuple[str, ...]:
        return tuple(sorted({p for t in self.timelines for p in t.valuation}))

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(sorted({t.label for t in self.timelines}))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.timelines)

    @property
    def base_domain(self) -> Domain:
        return Domain(0, self.domain_length - 1)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise LoadError(msg)


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def load(doc: Mapping[str, Any]) -> TemporalDataset:
    """Validate a dataset document and build an (unextended) dataset."""
    _require(isinstance(doc, Mapping), "dataset document must be an object")
    n = doc.get("domain_length")
    _require(_is_int(n) and n >= 2, f"domain_length must be an integer >= 2, got {n!r}")
    insts = doc.get("instances")
    _require(isinstance(insts, list) and len(insts) > 0, "instances must be a nonempty list")
    domain = Domain(0, n - 1)
    seen: set[str] = set()
    timelines = []
    for k, inst in enumerate(insts):
        where = f"instance #{k}"
        _require(isinstance(inst, Mapping), f"{where}: not an object")
        iid = inst.get("id")
        _require(isinstance(iid, str) and iid != "", f"{where}: missing or empty id")
        where = f"instance {iid!r}"
        _require(iid not in seen, f"{where}: duplicate id")
        seen.add(iid)
        label = inst.get("class")
        _require(isinstance(label, str) and label != "", f"{where}: missing class")
        events = inst.get("events", [])
        _require(isinstance(events, list), f"{where}: events must be a list")
        val: dict[str, set[Interval]] = {}
        for e, ev in enumerate(events):
            ew = f"{where} event #{e}"
            _require(isinstance(ev, Mapping), f"{ew}: not an object")
            prop, s, t = ev.get("prop"), ev.get("start"), ev.get("end")
            _require(isinstance(prop, str) and prop != "", f"{ew}: missing prop")
            _require(_is_int(s) and _is_int(t), f"{ew}: start/end must be integers")
            _require(s < t, f"{ew}: non-strict interval [{s},{t}] ({prop})")
            _require(0 <= s and t <= n - 1, f"{ew}: interval [{s},{t}] outside 0..{n - 1} ({prop})")
            val.setdefault(prop, set()).add(Interval(s, t))
        timelines.append(Timeline(iid, domain, {p: frozenset(v) for p, v in val.items()}, label))
    return TemporalDataset(domain, tuple(timelines), n)


def loads(text: str) -> TemporalDataset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON: {exc}") from None
    return load(doc)


def load_event_tables(events_csv: str, classes_csv: str, domain_length: int | None = None) -> TemporalDataset:
    """Build a dataset from the two flat tables.

    ``domain_length`` defaults to one past the largest event endpoint.
    Instances appear in the order of the class table.
    """
    ev_rows = list(csv.DictReader(io.StringIO(events_csv)))
    cl_rows = list(csv.DictReader(io.StringIO(classes_csv)))
    _require(len(cl_rows) > 0, "class table is empty")
    _require(set(cl_rows[0]) >= {"instance", "class"}, "class table header must be instance,class")
    if ev_rows:
        _require(set(ev_rows[0]) >= {"instance", "prop", "start", "end"},
                 "event table header must be instance,prop,start,end")
    events: dict[str, list[dict]] = {}
    for k, row in enumerate(ev_rows, start=2):
        try:
            s, t = int(row["start"]), int(row["end"])
        except (TypeError, ValueError):
            raise LoadError(f"event table line {k}: non-integer endpoint") from None
        events.setdefault(row["instance"], []).append({"prop": row["prop"], "start": s, "end": t})
    known = {r["instance"] for r in cl_rows}
    for iid in events:
        _require(iid in known, f"instance {iid!r}: missing class")
    if domain_length is None:
        ends = [e["end"] for evs in events.values() for e in evs]
        domain_length = max(ends, default=1) + 1
    doc = {
        "domain_length": domain_length,
        "instances": [
            {"id": r["instance"], "class": r["class"], "events": events.get(r["instance"], [])}
            for r in cl_rows
        ],
    }
    return load(doc)


def load_path(path: str | Path, classes: str | Path | None = None) -> TemporalDataset:
    """Load a JSON document, a CSV event table (needs ``classes``), or a bundled name."""
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        return bundled(str(path))
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".csv":
        if classes is None:
            raise LoadError(f"{p}: event tables need a class table")
        return load_event_tables(text, Path(classes).read_text(encoding="utf-8"))
    return loads(text)


def to_document(ds: TemporalDataset) -> dict[str, Any]:
    return {
        "domain_length": ds.domain_length,
        "instances": [
            {
                "id": t.id,
                "class": t.label,
                "events": [
                    {"prop": p, "start": i.start, "end": i.end}
                    for p in sorted(t.valuation)
                    for i in sorted(t.valuation[p])
                ],
            }
            for t in ds.timelines
        ],
    }


def dumps(ds: TemporalDataset) -> str:
    return json.dumps(to_document(ds), indent=2) + "\n"


def dump(ds: TemporalDataset, path: str | Path) -> None:
    Path(path).write_text(dumps(ds), encoding="utf-8")


def extend_domain(ds: TemporalDataset) -> TemporalDataset:
    """Add two points on each side of the domain; events are untouched."""
    if ds.extension_applied:
        raise ValueError("dataset domain is already extended")
    dom = ds.domain.extended(EXTENSION_POINTS)
    return TemporalDataset(dom, tuple(t.with_domain(dom) for t in ds.timelines), ds.domain_length, True)


@dataclass(frozen=True)
class StaticTable:
    """Attribute-value table: one row per instance, plus class labels."""

    attributes: tuple[str, ...]
    rows: tuple[Mapping[str, Any], ...]
    labels: tuple[str, ...]
    ids: tuple[str, ...] = ()

    def column(self, attribute: str) -> list[Any]:
        return [r[attribute] for r in self.rows]


def to_static_table(ds: TemporalDataset) -> StaticTable:
    """Flatten: attribute ``p`` is ``"yes"`` iff ``p`` holds somewhere on the timeline."""
    vocab = ds.vocabulary
    rows = tuple({p: "yes" if t.intervals_of(p) else "no" for p in vocab} for t in ds.timelines)
    return StaticTable(vocab, rows, tuple(t.label for t in ds.timelines), ds.ids)


def bundled(name: str) -> TemporalDataset:
    if name not in BUNDLED:
        raise LoadError(f"unknown bundled dataset {name!r}; choose from {', '.join(BUNDLED)}")
    text = resources.files("tid3").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return loads(text)


# --- synthetic data -----------------------------------------------------------


@dataclass(frozen=True)
class PlantedRule:
    """``first R second`` on some pair of intervals implies ``label``."""

    relation: Relation
    first: str
    second: str
    label: str

    def holds(self, t: Timeline) -> bool:
        return any(
            holds_diamond(t, self.relation, self.second, i) for i in t.intervals_of(self.first)
        )

    def __str__(self) -> str:
        return f"{self.first} {self.relation} {self.second} => {self.label}"


@dataclass(frozen=True)
class SynthSpec:
    n: int
    domain_length: int
    rules: tuple[PlantedRule, ...]
    default_label: str = "0"
    noise: float = 0.0
    seed: int = 0
    distractors: tuple[str, ...] = field(default=())
    negative_modes: tuple[str, ...] = ("first-only", "second-only")


NEGATIVE_MODES = ("first-only", "second-only", "both")


def min_domain_length(relation: Relation, limit: int = 16) -> int:
    """Smallest ``N`` such that two intervals over ``0..N-1`` can stand in ``relation``."""
    for n in range(2, limit + 1):
        ivs = enumerate_intervals(Domain(0, n - 1))
        if any(relates(i, j, relation) for i in ivs for j in ivs):
            return n
    raise ValueError(f"relation {relation} not realizable within {limit} points")


def synth(spec: SynthSpec) -> tuple[dict[str, Any], dict[str, Any]]:
    """Generate a dataset document with planted rules, and its ground truth.

    Every instance carries at most one interval per proposition. Rule
    instances realize their rule's relation on that pair and no other rule.
    Default-class instances satisfy no rule; ``negative_modes`` picks how: a
    rule's second (``first-only``) or first (``second-only``) proposition is
    dropped, or all are kept in some other relation (``both``). Labels are then
    flipped with probability ``noise`` to a different class.
    """
    if spec.n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= spec.noise < 1.0:
        raise ValueError("noise must lie in [0, 1)")
    if not spec.rules:
        raise ValueError("at least one planted rule is required")
    if not spec.negative_modes or set(spec.negative_modes) - set(NEGATIVE_MODES):
        raise ValueError(f"negative_modes must be a nonempty subset of {NEGATIVE_MODES}")
    need = max(min_domain_length(r.relation) for r in spec.rules)
    if spec.domain_length < need:
        raise ValueError(f"planted relations need domain_length >= {need}, got {spec.domain_length}")
    labels = sorted({r.label for r in spec.rules})
    if spec.default_label in labels:
        raise ValueError("default_label must differ from every rule label")
    classes = labels + [spec.default_label]
    props = sorted({p for r in spec.rules for p in (r.first, r.second)})
    rng = random.Random(spec.seed)
    dom = Domain(0, spec.domain_length - 1)
    ivs = enumerate_intervals(dom)

    def satisfied(events: dict[str, Interval]) -> list[PlantedRule]:
        t = Timeline("_", dom, {p: frozenset([i]) for p, i in events.items()}, "_")
        return [r for r in spec.rules if r.holds(t)]

    instances = []
    truth_labels = []
    for k in range(spec.n):
        target = rng.choice(classes)
        for _ in range(10_000):
            events: dict[str, Interval] = {}
            if target == spec.default_label:
                mode = rng.choice(spec.negative_modes)
                for p in props:
                    events[p] = rng.choice(ivs)
                if mode != "both":
                    r = rng.choice(spec.rules)
                    events.pop(r.second if mode == "first-only" else r.first, None)
                if not satisfied(events):
                    break
            else:
                rule = rng.choice([r for r in spec.rules if r.label == target])
                for p in props:
                    events[p] = rng.choice(ivs)
                pairs = [(i, j) for i in ivs for j in ivs if relates(i, j, rule.relation)]
                events[rule.first], events[rule.second] = rng.choice(pairs)
                if {r.label for r in satisfied(events)} == {target}:
                    break
        else:  # pragma: no cover - only reachable with contradictory rules
            raise ValueError(f"could not realize class {target!r} under the planted rules")
        for d in spec.distractors:
            events[d] = rng.choice(ivs)
        truth_labels.append(target)
        instances.append({
            "id": f"s{k:04d}",
            "class": target,
            "events": [{"prop": p, "start": i.start, "end": i.end} for p, i in sorted(events.items())],
        })

    flipped = []
    for inst in instances:
        if rng.random() < spec.noise:
            inst["class"] = rng.choice([c for c in classes if c != inst["class"]])
            flipped.append(inst["id"])

    doc = {"domain_length": spec.domain_length, "instances": instances}
    truth = {
        "rules": [
            {"relation": r.relation.value, "first": r.first, "second": r.second, "label": r.label}
            for r in spec.rules
        ],
        "default_label": spec.default_label,
        "noise": spec.noise,
        "seed": spec.seed,
        "negative_modes": list(spec.negative_modes),
        "n": spec.n,
        "domain_length": spec.domain_length,
        "true_labels": {inst["id"]: lab for inst, lab in zip(instances, truth_labels)},
        "flipped": flipped,
        "n_flipped": len(flipped),
    }
    return doc, truth


def parse_rule(text: str) -> PlantedRule:
    """Parse ``REL:first:second:label``, e.g. ``O:p:q:1``."""
    parts = text.split(":")
    if len(parts) != 4 or not all(parts):
        raise ValueError(f"rule must look like REL:first:second:label, got {text!r}")
    return PlantedRule(Relation.parse(parts[0]), parts[1], parts[2], parts[3])


def rules_from_truth(truth: Mapping[str, Any]) -> list[PlantedRule]:
    return [
        PlantedRule(Relation.parse(r["relation"]), r["first"], r["second"], r["label"])
        for r in truth["rules"]
    ]


def rule_label(rules: Sequence[PlantedRule], default: str, t: Timeline) -> str:
    hits = [r.label for r in rules if r.holds(t)]
    return hits[0] if hits else default
