"""Control-fraction and complexity scans for chains and square lattices.

Run with ``python demos/scan_chain_lattice.py``. For the chain the block
size grows like log2(N), so the control fraction falls while the
complexity stays polynomial. On the lattice the block side grows like
the square root of log2(N), so over every size that fits in memory it
takes only a couple of values and the fraction barely falls.
"""

from ecgraphs import CostModel, FamilySpec, PartitionStrategy, classify, family_scan

model = CostModel(x=1.0, eps_gate=0.1)
canonical = PartitionStrategy("canonical")


def show(title, scan):
    print(title)
    print(f"{'n':>9} {'c/n':>8} {'L_max':>5} {'D':>5} {'complexity':>12}")
    for pt in scan.points:
        m = pt.metrics
        print(f"{m.n:>9} {float(m.c_over_n):>8.4f} {m.l_max:>5} {m.D:>5g} {m.complexity:>12.4g}")
    v = classify(scan)
    print(f"beta_hat = {v.beta_hat:.3f}, ec_flag = {v.ec_flag}\n")


show("chain", family_scan(FamilySpec("chain"), canonical, [16, 64, 256, 1024], model))
show("square lattice", family_scan(FamilySpec("lattice", d=2), canonical, [4, 16, 64, 128],
                                   model))
