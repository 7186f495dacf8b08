import random

import pytest

from tid3.config import LearnerConfig
from tid3.dataio import bundled, load
from tid3.infogain import ClassDistribution, Condition
from tid3.intervals import Interval, Relation
from tid3.model import DecisionTree, Internal, Leaf

CLINIC_LABELS = {"P1": "C1", "P2": "C1", "P3": "C2", "P4": "C2"}


def random_document(rng: random.Random, max_n=12, max_len=6, max_props=3, max_events=3, n_classes=2):
    """Small random dataset document in the bounds used by the oracle checks."""
    n = rng.randint(1, max_n)
    length = rng.randint(2, max_len)
    props = [f"p{k}" for k in range(rng.randint(1, max_props))]
    instances = []
    for k in range(n):
        events = []
        for p in props:
            for _ in range(rng.randint(0, max_events)):
                s = rng.randint(0, length - 2)
                events.append({"prop": p, "start": s, "end": rng.randint(s + 1, length - 1)})
        instances.append({"id": f"t{k}", "class": f"c{rng.randrange(n_classes)}", "events": events})
    return {"domain_length": length, "instances": instances}


def random_dataset(seed, **kw):
    return load(random_document(random.Random(seed), **kw))


def _dist(**counts):
    return ClassDistribution(counts)


@pytest.fixture
def clinic():
    return bundled("fig2")


@pytest.fixture
def shifted():
    return bundled("fig4")


@pytest.fixture
def hand_tree():
    """Hand-built clinic tree whose second test is ⟨Oi⟩head, a tied alternative to the learned ⟨Ei⟩head."""
    inner = Internal(
        Condition("head", Relation.Oi),
        0.9182958340544893,
        _dist(C1=2, C2=1),
        Leaf("C2", _dist(C2=1), ("P3",)),
        Leaf("C1", _dist(C1=2), ("P1", "P2")),
    )
    root = Internal(
        Condition("fever", Relation.L),
        0.31127812445913283,
        _dist(C1=2, C2=2),
        inner,
        Leaf("C2", _dist(C2=1), ("P4",)),
        Interval(0, 1),
    )
    return DecisionTree(root, LearnerConfig(), ("fever", "head"), ("C1", "C2"), True)
