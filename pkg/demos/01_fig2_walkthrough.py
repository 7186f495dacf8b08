# Four patients, two symptoms, two diagnoses. Flattening the timelines loses the
# order of events; keeping the intervals lets a tree tell the classes apart.

import numpy as np

from tid3 import bundled, learn, to_static_table, training_accuracy
from tid3.model import rules, to_dot
from tid3.static import learn_static, static_accuracy

ds = bundled("fig2")
for t in ds:
    print(t.id, t.label, {p: sorted(map(str, v)) for p, v in t.valuation.items()})

# static view: fever yes/no, headache yes/no
table = to_static_table(ds)
print(table.attributes)
print(np.array([[r[a] for a in table.attributes] for r in table.rows]))
print("static ID3:", static_accuracy(learn_static(table), table))  # P1..P3 look identical here

tree = learn(ds)
print("temporal ID3:", training_accuracy(tree, ds))
print("\n".join(rules(tree)))

# the root looks from before the data starts; the left child is anchored on the fever interval
root = tree.root
print(root.reference, root.condition, round(root.gain, 4))
print(root.left.condition, round(root.left.gain, 4))

print(to_dot(tree))
