"""Decouple-and-transfer schedules between two blocks.

To act jointly on blocks ``src`` and ``dst`` the controls isolate one
adjacent pair of blocks at a time along a shortest block path and
synthesize a unitary on that pair, handing the quantum information one
step further each time. Only the pairwise syntheses are costed; the
decoupling itself is treated as free.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.sparse import csgraph

from .controllability import elementary_cost
from .exceptions import ParameterError, UnreachableError
from .graph import block_graph

__all__ = ["Step", "Schedule", "block_path", "build_schedule"]


def block_path(bg, src, dst):
    """Shortest block path from `src` to `dst`.

    Among shortest paths the lexicographically smallest sequence of block
    ids is returned.
    """
    for b in (src, dst):
        if not 0 <= b < bg.n_blocks:
            raise ParameterError(f"block id {b} out of range [0, {bg.n_blocks})")
    if src == dst:
        return [src]
    dist = csgraph.shortest_path(bg.graph.adjacency(), unweighted=True, directed=False,
                                 indices=dst)
    if math.isinf(dist[src]):
        raise UnreachableError(f"no block path from {src} to {dst}")
    path = [src]
    while path[-1] != dst:
        nb = bg.neighbors(path[-1])
        path.append(int(nb[np.argmax(dist[nb] == dist[path[-1]] - 1)]))
    return path


@dataclass
class Step:
    block_j: int
    block_k: int
    size_j: int
    size_k: int
    cost: float


@dataclass
class Schedule:
    path: list
    steps: list = field(default_factory=list)
    total_cost: float = 0.0
    cost_bound: float = 0.0

    def to_dict(self):
        return {"path": self.path, "total_cost": self.total_cost, "cost_bound": self.cost_bound,
                "steps": [vars(s) for s in self.steps]}

    def summary(self):
        return (f"schedule {self.path[0]}->{self.path[-1]}: {len(self.steps)} steps, "
                f"total cost {self.total_cost!r}")


def build_schedule(g, p, model, src, dst, bg=None):
    """Pairwise transfer schedule from block `src` to block `dst`.

    Each step costs ``elementary_cost(|b_j| + |b_k|)``. The reported
    ``cost_bound`` is ``len(steps) * elementary_cost(2 * L_max)``.
    """
    if bg is None:
        bg = block_graph(g, p)
    path = block_path(bg, src, dst)
    sizes = p.block_sizes()
    steps = []
    for j, k in zip(path, path[1:]):
        sj, sk = int(sizes[j]), int(sizes[k])
        steps.append(Step(j, k, sj, sk, elementary_cost(sj + sk, model)))
    total = math.fsum(s.cost for s in steps)
    bound = len(steps) * elementary_cost(2 * p.max_block, model) if steps else 0.0
    return Schedule(path, steps, total, bound)
