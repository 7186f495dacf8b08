import pytest

from tid3.config import LearnerConfig
from tid3.dataio import extend_domain, load
from tid3.infogain import Condition
from tid3.intervals import Interval, Relation
from tid3.learner import learn
from tid3.model import DecisionTree, Internal, Leaf
from tid3.oracle import (
    CANDIDATE_LIMIT,
    CandidateRow,
    OracleRefusal,
    brute_force_anchored,
    brute_force_candidates,
    relation_of,
    tie_break_key,
    verify_tree,
)

from .conftest import random_dataset


def test_relation_of_hand_cases():
    assert relation_of((0, 2), (2, 4)) == "A"
    assert relation_of((2, 4), (0, 2)) == "Ai"
    assert relation_of((0, 3), (2, 5)) == "O"
    assert relation_of((1, 3), (0, 4)) == "Di"
    assert relation_of((1, 3), (1, 3)) is None


def test_clinic_root_table(clinic):
    table = brute_force_candidates(clinic)
    # 55 reference intervals over -2..8, 13 test kinds, 2 propositions
    assert len(table) == 55 * 13 * 2
    best = table.best()
    assert (best.reference, best.kind, best.prop) == ((-2, -1), "L", "fever")
    assert best.left == ("P1", "P2", "P3") and best.right == ("P4",)
    assert table.max_gain == pytest.approx(0.31127812445913283, abs=1e-12)


def test_shifted_gain_one_only_with_extension(shifted):
    assert brute_force_candidates(shifted).max_gain == pytest.approx(1.0)
    flat = brute_force_candidates(shifted, LearnerConfig(extend_domain=False))
    assert flat.max_gain < 1.0 - 1e-9


def test_tie_break_key_order():
    rows = [
        CandidateRow((0, 2), "L", "a", 1.0, (), ()),
        CandidateRow((0, 1), "Oi", "a", 1.0, (), ()),
        CandidateRow((0, 1), "local", "z", 1.0, (), ()),
        CandidateRow((0, 1), "A", "b", 1.0, (), ()),
        CandidateRow((0, 1), "A", "a", 1.0, (), ()),
    ]
    ranked = sorted(rows, key=tie_break_key)
    assert [(r.reference, r.kind, r.prop) for r in ranked] == [
        ((0, 1), "local", "z"), ((0, 1), "A", "a"), ((0, 1), "A", "b"), ((0, 1), "Oi", "a"), ((0, 2), "L", "a"),
    ]


def test_relations_subset_limits_kinds(clinic):
    table = brute_force_candidates(clinic, LearnerConfig(relations=(Relation.O,)))
    assert {r.kind for r in table} == {"local", "O"}


def test_anchored_table(clinic):
    ds = extend_domain(clinic)
    cur = {"P1": (3, 4), "P2": (4, 5), "P3": (3, 5)}
    inst = [(t, cur[t.id]) for t in ds.timelines if t.id in cur]
    table = brute_force_anchored(inst)
    assert table.find(None, "Oi", "head").left == ("P3",)
    assert table.find(None, "Ei", "head").left == ("P1", "P2")
    assert table.best().kind == "Ei"
    with pytest.raises(KeyError):
        table.find(None, "Oi", "nothing")


def test_refuses_huge_enumeration():
    doc = {"domain_length": 200, "instances": [
        {"id": "a", "class": "x", "events": [{"prop": f"p{k}", "start": 0, "end": 1} for k in range(5)]}]}
    ds = load(doc)
    assert 204 * 203 // 2 * 13 * 5 > CANDIDATE_LIMIT
    with pytest.raises(OracleRefusal):
        brute_force_candidates(ds)


def test_verify_learned_tree(clinic):
    report = verify_tree(learn(clinic), clinic)
    assert report["ok"] and report["training_accuracy"] == 1.0
    assert report["gain_discrepancies"] == [] and report["replay_mismatches"] == []


def test_verify_flags_wrong_gain_and_membership(clinic):
    tree = learn(clinic)
    root = tree.root
    bad_root = Internal(root.condition, 0.9, root.distribution, root.left,
                        Leaf("C2", root.right.distribution, ("P3",)), root.reference)
    report = verify_tree(DecisionTree(bad_root, tree.config, tree.vocabulary, tree.classes, tree.extended), clinic)
    assert not report["ok"]
    assert report["gain_discrepancies"][0]["node"] == "root"
    # P3 is recorded in the right leaf but routes left
    assert [m["id"] for m in report["replay_mismatches"]] == ["P3"]


def test_verify_detects_condition_swap(clinic):
    tree = learn(clinic)
    root = tree.root
    swapped = Internal(Condition("head", Relation.L), root.gain, root.distribution, root.left, root.right,
                       Interval(-2, -1))
    report = verify_tree(DecisionTree(swapped, tree.config, tree.vocabulary, tree.classes, tree.extended), clinic)
    assert not report["ok"]


@pytest.mark.parametrize("seed", range(15))
def test_random_trees_verify(seed):
    ds = random_dataset(seed + 100)
    report = verify_tree(learn(ds), ds)
    assert report["ok"], report


def test_empty_vocabulary_table():
    ds = load({"domain_length": 3, "instances": [{"id": "a", "class": "x"}, {"id": "b", "class": "y"}]})
    table = brute_force_candidates(ds)
    assert len(table) == 0 and table.max_gain == 0.0
    with pytest.raises(ValueError):
        table.best()
    assert learn(ds).n_internal == 0
