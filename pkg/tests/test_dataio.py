import json

import pytest

from tid3.dataio import (
    LoadError,
    SynthSpec,
    bundled,
    dump,
    extend_domain,
    load,
    load_event_tables,
    load_path,
    loads,
    min_domain_length,
    parse_rule,
    rule_label,
    rules_from_truth,
    synth,
    to_static_table,
)
from tid3.intervals import Domain, Interval, Relation

from .conftest import CLINIC_LABELS


def doc_with(*events, n=5, cls="a"):
    return {"domain_length": n, "instances": [{"id": "x", "class": cls, "events": list(events)}]}


def test_bundled_clinic(clinic):
    assert clinic.domain == Domain(0, 6)
    assert clinic.ids == ("P1", "P2", "P3", "P4")
    assert {t.id: t.label for t in clinic} == CLINIC_LABELS
    assert clinic.vocabulary == ("fever", "head")
    p4 = clinic.timelines[3]
    assert p4.intervals_of("fever") == frozenset()
    assert p4.intervals_of("head") == {Interval(4, 6)}


def test_unknown_bundled():
    with pytest.raises(LoadError):
        bundled("fig9")


@pytest.mark.parametrize(
    "event, fragment",
    [
        ({"prop": "p", "start": 2, "end": 2}, "non-strict"),
        ({"prop": "p", "start": 3, "end": 1}, "non-strict"),
        ({"prop": "p", "start": 0, "end": 7}, "outside"),
        ({"prop": "p", "start": -1, "end": 2}, "outside"),
        ({"prop": "p", "start": 0.5, "end": 2}, "integers"),
        ({"start": 0, "end": 2}, "prop"),
    ],
)
def test_bad_events_name_the_record(event, fragment):
    with pytest.raises(LoadError) as err:
        load(doc_with(event))
    assert "'x'" in str(err.value) and fragment in str(err.value)


def test_document_level_errors():
    with pytest.raises(LoadError):
        load({"domain_length": 1, "instances": []})
    with pytest.raises(LoadError):
        load({"domain_length": 5, "instances": []})
    two = {"domain_length": 5, "instances": [{"id": "x", "class": "a"}, {"id": "x", "class": "b"}]}
    with pytest.raises(LoadError, match="duplicate"):
        load(two)
    with pytest.raises(LoadError, match="class"):
        load({"domain_length": 5, "instances": [{"id": "x"}]})
    with pytest.raises(LoadError):
        loads("[1, 2")


def test_duplicate_events_collapse():
    ev = {"prop": "p", "start": 0, "end": 2}
    ds = load(doc_with(ev, dict(ev)))
    assert ds.timelines[0].intervals_of("p") == {Interval(0, 2)}


def test_round_trip_through_file(tmp_path, clinic):
    path = tmp_path / "d.json"
    dump(clinic, path)
    again = load_path(path)
    assert again == clinic


def test_load_path_bundled_name():
    assert load_path("fig4").ids == ("P1", "P2", "P3", "P4")


def test_event_tables():
    events = "instance,prop,start,end\nA,p,0,2\nA,q,1,3\nB,p,2,4\n"
    classes = "instance,class\nA,yes\nB,no\nC,no\n"
    ds = load_event_tables(events, classes)
    assert ds.domain_length == 5
    assert ds.ids == ("A", "B", "C")
    assert ds.timelines[2].valuation == {}
    with pytest.raises(LoadError, match="missing class"):
        load_event_tables(events + "Z,p,0,1\n", classes)
    with pytest.raises(LoadError, match="line 2"):
        load_event_tables("instance,prop,start,end\nA,p,x,2\n", classes)


def test_csv_path_needs_classes(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("instance,prop,start,end\nA,p,0,2\n")
    with pytest.raises(LoadError):
        load_path(p)
    c = tmp_path / "c.csv"
    c.write_text("instance,class\nA,yes\n")
    assert load_path(p, c).ids == ("A",)


def test_extension(clinic):
    ext = extend_domain(clinic)
    assert ext.domain == Domain(-2, 8)
    assert ext.extension_applied and ext.base_domain == Domain(0, 6)
    assert all(t.domain == ext.domain for t in ext)
    assert [t.valuation for t in ext] == [t.valuation for t in clinic]
    with pytest.raises(ValueError):
        extend_domain(ext)


def test_static_table(clinic):
    table = to_static_table(clinic)
    assert table.attributes == ("fever", "head")
    assert table.column("fever") == ["yes", "yes", "yes", "no"]
    assert table.column("head") == ["yes"] * 4
    assert table.labels == ("C1", "C1", "C2", "C2")


def test_min_domain_length():
    assert min_domain_length(Relation.A) == 3
    assert min_domain_length(Relation.O) == 4
    assert min_domain_length(Relation.L) == 4
    assert min_domain_length(Relation.D) == 4


def test_parse_rule():
    r = parse_rule("O:p:q:1")
    assert (r.relation, r.first, r.second, r.label) == (Relation.O, "p", "q", "1")
    with pytest.raises(ValueError):
        parse_rule("O:p:q")
    with pytest.raises(ValueError):
        parse_rule("Z:p:q:1")


@pytest.mark.parametrize("modes", [("first-only", "second-only"), ("both",), ("first-only", "second-only", "both")])
def test_synth_labels_follow_rules(modes):
    rule = parse_rule("O:p:q:1")
    doc, truth = synth(SynthSpec(60, 8, (rule,), seed=4, negative_modes=modes, distractors=("r",)))
    ds = load(doc)
    assert len(ds) == 60 and ds.domain_length == 8
    assert truth["n_flipped"] == 0
    for t in ds:
        assert t.label == rule_label([rule], "0", t) == truth["true_labels"][t.id]
        assert all(len(t.intervals_of(p)) <= 1 for p in ("p", "q"))
        assert len(t.intervals_of("r")) == 1
    assert set(ds.classes) == {"0", "1"}
    assert rules_from_truth(truth) == [rule]


def test_synth_is_seeded():
    spec = SynthSpec(30, 10, (parse_rule("O:p:q:1"),), seed=9)
    assert json.dumps(synth(spec)) == json.dumps(synth(spec))
    other = SynthSpec(30, 10, (parse_rule("O:p:q:1"),), seed=10)
    assert synth(spec)[0] != synth(other)[0]


def test_synth_noise_flips_recorded_labels():
    rule = parse_rule("A:p:q:1")
    doc, truth = synth(SynthSpec(200, 6, (rule,), noise=0.2, seed=1))
    flipped = set(truth["flipped"])
    assert 0 < len(flipped) < 100
    for inst in doc["instances"]:
        assert (inst["class"] != truth["true_labels"][inst["id"]]) == (inst["id"] in flipped)


def test_synth_rejects_bad_specs():
    rule = parse_rule("O:p:q:1")
    with pytest.raises(ValueError, match="domain_length"):
        synth(SynthSpec(10, 3, (rule,)))
    with pytest.raises(ValueError):
        synth(SynthSpec(10, 8, (rule,), default_label="1"))
    with pytest.raises(ValueError):
        synth(SynthSpec(10, 8, (rule,), noise=1.0))
    with pytest.raises(ValueError):
        synth(SynthSpec(10, 8, (rule,), negative_modes=("sideways",)))
    with pytest.raises(ValueError):
        synth(SynthSpec(10, 8, ()))


def test_synth_two_rules():
    rules = (parse_rule("O:p:q:1"), parse_rule("L:r:s:2"))
    doc, truth = synth(SynthSpec(80, 8, rules, seed=2))
    ds = load(doc)
    assert set(ds.classes) == {"0", "1", "2"}
    for t in ds:
        assert rule_label(list(rules), "0", t) == t.label
