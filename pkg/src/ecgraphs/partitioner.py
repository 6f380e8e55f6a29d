"""Partition arbitrary graphs into blocks and controls.

Three mechanisms are provided: greedy size-capped block growing, random
removal of a fraction of vertices, and removal of the highest-degree
vertices. In every case the blocks are the connected components left after
deleting the controls, ordered by smallest vertex id.
"""

from collections import deque
from dataclasses import dataclass, asdict
import math

import numpy as np

from .exceptions import ParameterError
from .graph import Partition, component_labels

__all__ = [
    "PartitionStrategy",
    "grow_blocks",
    "delta_removal_partition",
    "high_degree_partition",
    "partition_from_controls",
]


def partition_from_controls(g, controls):
    """Blocks are the components of `g` with `controls` deleted."""
    ctrl = np.zeros(g.n, dtype=bool)
    ctrl[np.asarray(controls, dtype=np.int64)] = True
    labels, _ = component_labels(g, ~ctrl)
    return Partition.from_labels(labels)


def grow_blocks(g, max_block):
    """Greedy breadth-first blocks of at most `max_block` vertices.

    A block starts at the lowest-id vertex that is neither assigned nor a
    control and absorbs free vertices in BFS order (neighbors by ascending
    id) until it is full or exhausted. When a block closes, every
    unassigned neighbor of it becomes a control, which makes the result a
    valid separator.
    """
    if max_block < 1:
        raise ParameterError(f"max_block must be >= 1, got {max_block}")
    n = g.n
    indptr, indices = g.indptr, g.indices
    # -2 free, -1 control, >= 0 block index
    state = np.full(n, -2, dtype=np.int64)
    nblocks = 0
    for start in range(n):
        if state[start] != -2:
            continue
        k = nblocks
        nblocks += 1
        state[start] = k
        members = [start]
        queue = deque([start])
        while queue and len(members) < max_block:
            u = queue.popleft()
            for w in indices[indptr[u]:indptr[u + 1]]:
                if state[w] == -2:
                    state[w] = k
                    members.append(w)
                    queue.append(w)
                    if len(members) == max_block:
                        break
        for u in members:
            nb = indices[indptr[u]:indptr[u + 1]]
            state[nb[state[nb] == -2]] = -1
    return Partition.from_labels(state)


def delta_removal_partition(g, delta, seed):
    """Mark each vertex as a control independently with probability `delta`.

    One uniform is drawn per vertex in id order from ``default_rng(seed)``.
    """
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    rng = np.random.default_rng(seed)
    return partition_from_controls(g, np.flatnonzero(rng.random(g.n) < delta))


def high_degree_partition(g, f):
    """Take the ``ceil(f*n)`` highest-degree vertices (ties: lower id) as controls."""
    if not 0 < f < 1:
        raise ParameterError(f"fraction must lie in (0, 1), got {f}")
    order = np.lexsort((np.arange(g.n), -g.degree))
    return partition_from_controls(g, order[:math.ceil(f * g.n)])


_RELEVANT = {"canonical": (), "grow": ("max_block",), "delta-removal": ("delta", "seed"),
             "high-degree": ("f",)}


@dataclass(frozen=True)
class PartitionStrategy:
    """How to partition a graph.

    ``max_block=None`` for ``grow`` means ``ceil(log2 n)``.
    """

    kind: str
    max_block: int = None
    delta: float = None
    f: float = None
    seed: int = 0

    def __post_init__(self):
        kinds = ("canonical", "grow", "delta-removal", "high-degree")
        if self.kind not in kinds:
            raise ParameterError(f"unknown strategy {self.kind!r}; expected one of {kinds}")
        relevant = _RELEVANT[self.kind]
        extra = [k for k in ("max_block", "delta", "f")
                 if getattr(self, k) is not None and k not in relevant]
        if extra:
            raise ParameterError(f"strategy {self.kind!r} takes no {', '.join(extra)}")
        if self.kind == "grow" and self.max_block is not None and self.max_block < 1:
            raise ParameterError(f"max_block must be >= 1, got {self.max_block}")
        if self.kind == "delta-removal" and (self.delta is None or not 0 < self.delta < 1):
            raise ParameterError(f"delta-removal needs 0 < delta < 1, got {self.delta}")
        if self.kind == "high-degree" and (self.f is None or not 0 < self.f < 1):
            raise ParameterError(f"high-degree needs 0 < f < 1, got {self.f}")

    def to_dict(self):
        keep = {"kind", *_RELEVANT[self.kind]}
        return {k: v for k, v in asdict(self).items() if v is not None and k in keep}

    def apply(self, g, canonical=None):
        if self.kind == "canonical":
            if canonical is None:
                raise ParameterError("this family has no canonical partition")
            return canonical
        if self.kind == "grow":
            cap = self.max_block
            if cap is None:
                cap = max(1, math.ceil(math.log2(max(g.n, 2))))
            return grow_blocks(g, cap)
        if self.kind == "delta-removal":
            return delta_removal_partition(g, self.delta, self.seed)
        return high_degree_partition(g, self.f)
