"""Adversarial search for the best empirical inequality constants.

Runs a short multi-start hill climb on two objectives, prints the
improvement traces, and shows that the reported witness replays to
exactly the reported ratio.
"""

import math

from schattenlab import InstanceSpec, maximize, replay_witness

spec = InstanceSpec(dim=4, seed=42)

rep = maximize("eq1-plus", {"p": 1.0, "q": 0.5}, spec, budget=300, starts=8)
print("eq1-plus (p=1, q=1/2)")
print("  best ratio: %.6f" % rep.best_ratio)
print("  trace tail:", [(i, round(v, 4)) for i, v in rep.trace[-5:]])
print("  plateau improvement (final quarter): %.4f%%"
      % (100 * rep.plateau_improvement()))
print("  witness replays to: %.6f" % replay_witness(rep))

rep = maximize("main", {"alpha": 1.0, "s": 4.0 / 3.0, "r": math.inf}, spec,
               budget=300, starts=8)
print("\nmain (alpha=1, s=4/3, r=inf)")
print("  best ratio: %.6f" % rep.best_ratio)
print("  flagged near-kernel instances: %d" % rep.flagged_instances)

# the minimizing objective searches for the least convex family
rep = maximize("convexity-defect-min", {"alpha": 1.0, "q": 1.0}, spec,
               budget=20, starts=2)
print("\nconvexity-defect-min (alpha=1, q=1)")
print("  smallest defect found: %.6f" % rep.best_ratio)
