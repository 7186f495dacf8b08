"""Temporal ID3: decision trees whose tests are interval temporal logic formulas."""

from .config import LearnerConfig, StoppingConfig
from .dataio import TemporalDataset, bundled, extend_domain, load, load_path, loads, to_static_table
from .hs import Timeline, holds_box_neg, holds_diamond, holds_local, witnesses
from .intervals import RELATIONS, Domain, Interval, Relation, relates, transpose
from .learner import learn, training_accuracy
from .model import DecisionTree, classify, path_formula, to_dot

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "Interval",
    "Relation",
    "RELATIONS",
    "relates",
    "transpose",
    "Timeline",
    "holds_local",
    "holds_diamond",
    "holds_box_neg",
    "witnesses",
    "TemporalDataset",
    "load",
    "loads",
    "load_path",
    "bundled",
    "extend_domain",
    "to_static_table",
    "LearnerConfig",
    "StoppingConfig",
    "learn",
    "training_accuracy",
    "DecisionTree",
    "classify",
    "path_formula",
    "to_dot",
]
