"""Scale-free graphs with their highest-degree vertices taken as controls.

Run with ``python demos/scale_free.py``. Hubs are few but touch many
edges, so removing a small fraction of vertices fragments the graph.
The table shows how the largest remaining block compares with n.
"""

from ecgraphs import gen_scale_free, high_degree_partition

for n in (1000, 10000, 100000):
    g = gen_scale_free(n, alpha=2.5, kmin=2, seed=1)
    p = high_degree_partition(g, 0.02)
    print(f"n = {g.n:6d}: {p.num_controls} controls, {p.n_blocks} blocks, "
          f"largest block {p.max_block} ({p.max_block / g.n:.3f} of n)")
