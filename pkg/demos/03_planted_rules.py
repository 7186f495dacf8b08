# Plant "p overlaps q => class 1", hide it among distractors, and see what comes back.

from collections import Counter

from tid3 import learn, load, training_accuracy
from tid3.dataio import SynthSpec, parse_rule, synth, to_static_table
from tid3.hs import build_sat_table
from tid3.intervals import RELATIONS
from tid3.model import rules
from tid3.static import learn_static, static_accuracy

rule = parse_rule("O:p:q:1")
doc, truth = synth(SynthSpec(50, 10, (rule,), seed=0, distractors=("r",)))
ds = load(doc)
print(len(ds), "timelines,", dict(sorted(Counter(t.label for t in ds).items())))

tree = learn(ds)
print("accuracy", training_accuracy(tree, ds), "depth", tree.depth)
print("\n".join(rules(tree)))  # q Oi p is the planted p O q, read from q

# negatives that keep both propositions force a truly temporal distinction
doc2, _ = synth(SynthSpec(50, 10, (rule,), seed=0, negative_modes=("both",)))
ds2 = load(doc2)
table = to_static_table(ds2)
print("static:", static_accuracy(learn_static(table), table), "temporal:", training_accuracy(learn(ds2), ds2))

# one timeline's satisfaction table: how many intervals see each test true
t = ds.timelines[0]
sat = build_sat_table(t, ("p", "q", "r"))
counts = sat.data.sum(axis=2)
print(t.id, t.label, {p: [str(i) for i in v] for p, v in t.valuation.items()})
print("kinds:", ["p"] + [r.value for r in RELATIONS])
print(counts)

# label noise: the tree grows, and labels flipped onto identical timelines stay wrong
for noise in (0.0, 0.1, 0.2):
    d, tr = synth(SynthSpec(80, 10, (rule,), noise=noise, seed=3))
    noisy = load(d)
    tree = learn(noisy)
    print(noise, tr["n_flipped"], "flipped ->", tree.n_internal, "internal nodes, acc", training_accuracy(tree, noisy))
