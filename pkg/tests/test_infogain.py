import math

import pytest

from tid3.dataio import StaticTable, extend_domain, load, to_static_table
from tid3.infogain import (
    AnchoringState,
    ClassDistribution,
    Condition,
    ContractError,
    NodeDataset,
    classical_gain,
    entropy,
    gain,
    info,
    local_gain,
    split_local,
    split_temporal,
    temporal_gain,
)
from tid3.intervals import Interval, Relation


def anchored(ds, ref):
    nd = NodeDataset.fresh(ds.timelines)
    for s in nd.states:
        s.anchor(ref)
    nd.anchored = True
    return nd


def test_entropy_values():
    assert entropy([1.0]) == 0.0
    assert entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy([0.25] * 4) == pytest.approx(2.0)
    assert entropy([1 / 3, 2 / 3]) == pytest.approx(0.9182958340544896)
    assert entropy([0.0, 1.0]) == 0.0


def test_entropy_rejects_bad_input():
    with pytest.raises(ValueError):
        entropy([0.5, 0.6])
    with pytest.raises(ValueError):
        entropy([-0.1, 1.1])


def test_distribution_normalizes():
    d = ClassDistribution({"b": 1, "a": 2, "z": 0})
    assert list(d.counts) == ["a", "b"]
    assert d == ClassDistribution.of(["b", "a", "a"])
    assert d.total == 3 and not d.is_pure
    assert str(d) == "{a:2, b:1}"
    assert (d + ClassDistribution({"b": 1})).counts == {"a": 2, "b": 2}


def test_majority_breaks_ties_lexicographically():
    assert ClassDistribution({"C2": 2, "C1": 2}).majority() == "C1"
    assert ClassDistribution({"C2": 3, "C1": 2}).majority() == "C2"


def test_info_of_empty_raises():
    with pytest.raises(ValueError):
        info(ClassDistribution({}))


def test_condition_rendering():
    assert Condition("fever", Relation.L).positive() == "⟨L⟩fever"
    assert Condition("fever", Relation.L).negative() == "[L]¬fever"
    assert Condition("fever").negative() == "¬fever"


def test_anchoring_state_sets_reference_once():
    s = AnchoringState()
    assert not s.anchored
    s.anchor(Interval(0, 1))
    assert s.current == Interval(0, 1)
    with pytest.raises(ContractError):
        s.anchor(Interval(0, 2))
    m = s.moved(Interval(3, 4))
    assert m.reference == Interval(0, 1) and m.current == Interval(3, 4)
    with pytest.raises(ValueError):
        AnchoringState(Interval(0, 1), None)


def test_partition_needs_anchoring(clinic):
    nd = NodeDataset.fresh(extend_domain(clinic).timelines)
    with pytest.raises(ContractError):
        split_local(nd, "fever")
    with pytest.raises(ValueError):
        NodeDataset(nd.timelines, nd.states, anchored=True)


def test_root_temporal_split_on_clinic(clinic):
    nd = anchored(extend_domain(clinic), Interval(-2, -1))
    left, right = split_temporal(nd, Relation.L, "fever")
    assert left.ids == ["P1", "P2", "P3"] and right.ids == ["P4"]
    # current intervals are not moved by the bare split
    assert all(s.current == Interval(-2, -1) for s in left.states)
    r, g = temporal_gain(nd, "fever")
    assert r is Relation.L
    expect = 1.0 - 0.75 * info(ClassDistribution({"C1": 2, "C2": 1}))
    assert g == pytest.approx(expect, abs=1e-12)


def test_gain_prefers_local_on_ties():
    doc = {"domain_length": 5, "instances": [
        {"id": "a", "class": "x", "events": [{"prop": "p", "start": 0, "end": 2}, {"prop": "p", "start": 2, "end": 4}]},
        {"id": "b", "class": "y", "events": []},
    ]}
    nd = anchored(load(doc), Interval(0, 2))
    r, g = temporal_gain(nd, "p")
    assert r is Relation.A and g == pytest.approx(1.0)
    c = gain(nd, "p")
    assert c.condition == Condition("p")
    assert c.gain == pytest.approx(local_gain(nd, "p")) == pytest.approx(1.0)


def test_local_split_partitions(clinic):
    nd = anchored(extend_domain(clinic), Interval(3, 4))
    left, right = split_local(nd, "fever")
    assert left.ids == ["P1"]
    assert sorted(left.ids + right.ids) == sorted(nd.ids)


def test_classical_gain_categorical_and_numeric():
    t = StaticTable(("a", "n"), ({"a": "yes", "n": 1}, {"a": "yes", "n": 2}, {"a": "no", "n": 3}, {"a": "no", "n": 4}),
                    ("x", "x", "y", "y"))
    g = classical_gain(t, "a")
    assert g.gain == pytest.approx(1.0) and g.threshold is None
    g = classical_gain(t, "n")
    assert g.gain == pytest.approx(1.0) and g.threshold == 2


def test_classical_gain_on_flattened_clinic(clinic):
    table = to_static_table(clinic)
    g_fever = classical_gain(table, "fever")
    g_head = classical_gain(table, "head")
    parent = 1.0
    expect = parent - 0.75 * info(ClassDistribution({"C1": 2, "C2": 1}))
    assert g_fever.gain == pytest.approx(expect)
    assert g_head.gain == pytest.approx(0.0)
    assert math.isclose(g_fever.info_att, parent - g_fever.gain)
