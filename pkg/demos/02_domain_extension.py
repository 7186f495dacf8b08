# Why two extra points on each side of the domain matter.

import numpy as np

from tid3 import LearnerConfig, bundled, learn
from tid3.model import rules
from tid3.oracle import brute_force_candidates

ds = bundled("fig4")

ext = brute_force_candidates(ds)
flat = brute_force_candidates(ds, LearnerConfig(extend_domain=False))
print("candidates:", len(ext), "extended vs", len(flat), "plain")
print("best gain:", ext.max_gain, "extended vs", flat.max_gain, "plain")

b = ext.best()
print(b.reference, b.kind, b.prop, b.left, b.right)

# the gain landscape of <L>fever over every reference interval of the extended domain
gains = np.array([r.gain for r in ext if r.kind == "L" and r.prop == "fever"])
refs = [r.reference for r in ext if r.kind == "L" and r.prop == "fever"]
print(np.round(gains, 3))
print("perfect splits from:", [refs[k] for k in np.flatnonzero(np.isclose(gains, 1.0))])

print("\n".join(rules(learn(ds))))
print("---")
print("\n".join(rules(learn(ds, LearnerConfig(extend_domain=False)))))
