"""Site percolation near threshold, partitioned by random control removal.

Run with ``python demos/percolation.py``. The threshold estimate comes
from bisection on the spanning probability. The largest cluster at that
threshold is then split by declaring each vertex a control with
probability delta. Near criticality the largest surviving block shrinks
as a power of delta, so a small control fraction already gives blocks
far smaller than the cluster.
"""

import numpy as np

from ecgraphs import FamilySpec, delta_removal_partition, estimate_pc

pc = estimate_pc(side=200, d=2, trials=20, seed=5)
print(f"estimated p_c on 200x200: {pc:.4f}")

deltas = [0.05, 0.1, 0.15, 0.2]
means = []
for delta in deltas:
    sizes = []
    for s in range(10):
        g, _ = FamilySpec("percolated-lattice", side=200, d=2, p=pc, seed=s).generate()
        sizes.append(delta_removal_partition(g, delta, 1000 + s).max_block)
    means.append(float(np.mean(sizes)))
    print(f"delta {delta:.2f}: cluster size ~{g.n}, mean largest block {means[-1]:.1f}")

slope = np.polyfit(np.log(deltas), np.log(means), 1)[0]
print(f"log-log slope of largest block against delta: {slope:.3f}")
