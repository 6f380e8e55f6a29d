"""Graphs, partitions into blocks and controls, and the block graph.

Vertices are the integers ``0 .. n-1``. Edge arrays are kept in a canonical
form (``u < v``, rows sorted lexicographically, no duplicates), which makes
equality and serialization byte-stable.

A :class:`Partition` splits the vertex set into disjoint connected *blocks*
and a set of *control* vertices separating them. Blocks are stored as sorted
``int64`` arrays.
"""

from dataclasses import dataclass, field
import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .exceptions import GraphError, PartitionError

__all__ = [
    "Graph",
    "Partition",
    "BlockGraph",
    "Validation",
    "build_graph",
    "component_labels",
    "connected_components",
    "largest_component",
    "validate_partition",
    "block_graph",
    "diameter",
]


def _canonical_edges(n, edges):
    edges = np.asarray(edges, dtype=np.int64)
    if edges.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise GraphError(f"edges must be a sequence of pairs, got shape {edges.shape}")
    bad = (edges < 0) | (edges >= n)
    if bad.any():
        u, v = edges[np.flatnonzero(bad.any(axis=1))[0]]
        raise GraphError(f"edge ({u},{v}) has an endpoint outside [0, {n})")
    loops = edges[:, 0] == edges[:, 1]
    if loops.any():
        u = edges[np.flatnonzero(loops)[0], 0]
        raise GraphError(f"self-loop at vertex {u}")
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    keys = np.unique(lo * n + hi)
    return np.stack([keys // n, keys % n], axis=1)


class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : array_like, shape (m, 2)
        Vertex pairs. Duplicates (in either orientation) are merged.

    Raises
    ------
    GraphError
        On an out-of-range endpoint or a self-loop.
    """

    __slots__ = ("n", "edges", "indptr", "indices", "degree")

    def __init__(self, n, edges=(), _canonical=False):
        n = int(n)
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2) if _canonical \
            else _canonical_edges(n, edges)
        edges.flags.writeable = False
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        degree = np.bincount(src, minlength=n).astype(np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degree, out=indptr[1:])
        indices = dst[order]
        for arr in (degree, indptr, indices):
            arr.flags.writeable = False
        self.n = n
        self.edges = edges
        self.indptr = indptr
        self.indices = indices
        self.degree = degree

    @property
    def num_edges(self):
        return len(self.edges)

    def neighbors(self, v):
        """Sorted neighbor ids of `v`."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency(self):
        """Symmetric CSR adjacency matrix with unit weights."""
        data = np.ones(len(self.indices), dtype=np.int8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def edge_set(self):
        return {(int(u), int(v)) for u, v in self.edges}

    def subgraph(self, vertices):
        """Induced subgraph on `vertices`, relabeled ``0..k-1`` in ascending id order.

        Returns the subgraph and the array mapping new ids to old ids.
        """
        ids = np.unique(np.asarray(vertices, dtype=np.int64))
        local = np.full(self.n, -1, dtype=np.int64)
        local[ids] = np.arange(len(ids))
        e = local[self.edges]
        e = e[(e >= 0).all(axis=1)]
        return Graph(len(ids), e, _canonical=True), ids

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def build_graph(n, edges):
    """Validate and canonicalize an edge list into a :class:`Graph`."""
    return Graph(n, edges)


def component_labels(g, active=None):
    """Label connected components, numbered by their smallest vertex.

    Parameters
    ----------
    g : Graph
    active : ndarray of bool, optional
        Restrict to the subgraph induced by ``active`` vertices. Inactive
        vertices get label ``-1``.

    Returns
    -------
    labels : ndarray of int64
    count : int
    """
    if active is None:
        active = np.ones(g.n, dtype=bool)
    e = g.edges[active[g.edges[:, 0]] & active[g.edges[:, 1]]]
    a = sp.csr_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    _, raw = csgraph.connected_components(a, directed=False)
    raw = np.where(active, raw, -1)
    act = np.flatnonzero(active)
    if len(act) == 0:
        return raw, 0
    # Vertices are scanned in id order, so first appearance == smallest member.
    uniq, first = np.unique(raw[act], return_index=True)
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(uniq))
    labels = np.full(g.n, -1, dtype=np.int64)
    labels[act] = rank[np.searchsorted(uniq, raw[act])]
    return labels, len(uniq)


def _groups(labels, count):
    """Split vertex ids by label into sorted arrays, one per label ``0..count-1``."""
    ids = np.flatnonzero(labels >= 0)
    order = np.argsort(labels[ids], kind="stable")
    sizes = np.bincount(labels[ids], minlength=count)
    return np.split(ids[order], np.cumsum(sizes)[:-1]) if count else []


def connected_components(g):
    """Vertex sets of the connected components, ordered by smallest member."""
    labels, count = component_labels(g)
    return _groups(labels, count)


def largest_component(g):
    """Induced subgraph on the largest component (ties: smallest member) and its id map."""
    labels, count = component_labels(g)
    if count == 0:
        return g, np.arange(0, dtype=np.int64)
    sizes = np.bincount(labels, minlength=count)
    return g.subgraph(np.flatnonzero(labels == int(np.argmax(sizes))))


class Partition:
    """Disjoint blocks plus a control (separator) set.

    Parameters
    ----------
    blocks : sequence of iterables of int
        Block vertex sets, kept in the given order.
    controls : iterable of int
    """

    __slots__ = ("blocks", "controls")

    def __init__(self, blocks, controls=()):
        self.blocks = tuple(_as_ids(b) for b in blocks)
        self.controls = _as_ids(controls)

    @classmethod
    def from_labels(cls, labels):
        """Build from a label array: ``-1`` marks controls, ``k >= 0`` block ``k``.

        Blocks are reordered by smallest member.
        """
        labels = np.asarray(labels, dtype=np.int64)
        count = int(labels.max()) + 1 if labels.size else 0
        blocks = [b for b in _groups(labels, count) if len(b)]
        blocks.sort(key=lambda b: b[0])
        return cls(blocks, np.flatnonzero(labels == -1))

    @property
    def n_blocks(self):
        return len(self.blocks)

    @property
    def num_controls(self):
        return len(self.controls)

    def block_sizes(self):
        return np.array([len(b) for b in self.blocks], dtype=np.int64)

    @property
    def max_block(self):
        return max((len(b) for b in self.blocks), default=0)

    def labels(self, n):
        """Per-vertex block index, ``-1`` for controls, ``-2`` for uncovered.

        Assumes the partition is valid; on overlaps the last writer wins.
        """
        lab = np.full(n, -2, dtype=np.int64)
        lab[self.controls] = -1
        sizes = self.block_sizes()
        if len(sizes):
            lab[np.concatenate(self.blocks)] = np.repeat(np.arange(len(sizes)), sizes)
        return lab

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return (np.array_equal(self.controls, other.controls)
                and len(self.blocks) == len(other.blocks)
                and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)))

    __hash__ = None

    def __repr__(self):
        return (f"Partition(blocks={self.n_blocks}, controls={self.num_controls}, "
                f"max_block={self.max_block})")


def _as_ids(values):
    if isinstance(values, (set, frozenset)):
        values = sorted(values)
    return np.unique(np.asarray(values, dtype=np.int64).ravel())


@dataclass
class Validation:
    """Outcome of :func:`validate_partition`; truthy iff there are no violations."""

    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def raise_if_invalid(self):
        if self.violations:
            raise PartitionError("invalid partition: " + "; ".join(self.violations))


def validate_partition(g, p, max_witnesses=10):
    """Check every partition invariant against `g`.

    Violations are returned as messages naming the broken invariant and
    (up to `max_witnesses` per kind) the offending vertices.
    """
    out = []

    def report(items, fmt):
        for item in items[:max_witnesses]:
            out.append(fmt(item))
        if len(items) > max_witnesses:
            out.append(f"... {len(items) - max_witnesses} more")

    sets = list(p.blocks) + [p.controls]
    allv = np.concatenate(sets) if sets else np.empty(0, dtype=np.int64)
    bad = allv[(allv < 0) | (allv >= g.n)]
    report(np.unique(bad).tolist(), lambda v: f"vertex {v} out of range")
    allv = allv[(allv >= 0) & (allv < g.n)]
    count = np.bincount(allv, minlength=g.n)
    report(np.flatnonzero(count > 1).tolist(), lambda v: f"vertex {v} in more than one set")
    report(np.flatnonzero(count == 0).tolist(), lambda v: f"vertex {v} uncovered")

    sizes = np.array([len(b) for b in p.blocks], dtype=np.int64)
    ids = np.repeat(np.arange(len(sizes)), sizes)
    flat = np.concatenate(p.blocks) if len(sizes) else np.empty(0, dtype=np.int64)
    valid = (flat >= 0) & (flat < g.n)
    flat, ids = flat[valid], ids[valid]
    # a vertex listed in several blocks belongs to the first of them
    first = np.unique(flat, return_index=True)[1]
    lab = np.full(g.n, -1, dtype=np.int64)
    lab[flat[first]] = ids[first]
    lu, lv = lab[g.edges[:, 0]], lab[g.edges[:, 1]]
    cross = g.edges[(lu >= 0) & (lv >= 0) & (lu != lv)]
    report([tuple(e) for e in cross.tolist()], lambda e: f"inter-block edge ({e[0]},{e[1]})")

    for k in np.flatnonzero(sizes == 0).tolist():
        out.append(f"block {k} is empty")
    inside = np.flatnonzero(lab >= 0)
    pieces, _ = component_labels(g, lab >= 0)
    # distinct (block, piece) pairs; a connected block has exactly one
    key = np.unique(lab[inside] * (g.n + 1) + pieces[inside])
    blk = key // (g.n + 1)
    split = np.unique(blk[1:][blk[1:] == blk[:-1]])
    for k in split.tolist():
        own = inside[lab[inside] == k]
        parts = np.unique(pieces[own])
        a = own[pieces[own] == parts[0]][0]
        c = own[pieces[own] == parts[1]][0]
        out.append(f"block {k} disconnected (vertices {a} and {c} in different pieces)")
    return Validation(out)


def _pairs_within(group, member, size):
    """All unordered member pairs sharing a group, as keys ``lo*size + hi``.

    `group` must be sorted; repeated (group, member) rows are not expected.
    """
    if len(group) < 2:
        return np.empty(0, dtype=np.int64)
    starts = np.flatnonzero(np.r_[True, group[1:] != group[:-1]])
    ends = np.r_[starts[1:], len(group)]
    end_of = np.repeat(ends, ends - starts)
    counts = end_of - np.arange(len(group)) - 1
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    left = np.repeat(np.arange(len(group)), counts)
    offset = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts) + 1
    a, b = member[left], member[left + offset]
    return np.minimum(a, b) * size + np.maximum(a, b)


def _cross_pairs(ptr, member, us, vs, size):
    """Keys for every pair (x, y) with x in group ``us[i]`` and y in group ``vs[i]``."""
    su = ptr[us + 1] - ptr[us]
    sv = ptr[vs + 1] - ptr[vs]
    counts = su * sv
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    edge = np.repeat(np.arange(len(us)), counts)
    k = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    a = member[ptr[us[edge]] + k // sv[edge]]
    b = member[ptr[vs[edge]] + k % sv[edge]]
    keep = a != b
    a, b = a[keep], b[keep]
    return np.minimum(a, b) * size + np.maximum(a, b)


class BlockGraph:
    """Blocks as nodes; an edge wherever two blocks share a boundary.

    Attributes
    ----------
    n_blocks : int
    pairs : ndarray, shape (m, 2)
        Adjacent block pairs ``(j, k)`` with ``j < k``, sorted.
    boundary_sizes : dict
        ``(j, k) -> number of control vertices with neighbors in both blocks``
        (the size of the overlap of the two blocks' closed neighborhoods).
        Blocks joined only through longer control chains are adjacent but
        have no entry.
    """

    def __init__(self, n_blocks, pairs, boundary_sizes=None):
        self.n_blocks = int(n_blocks)
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        self.pairs = pairs
        self.boundary_sizes = dict(boundary_sizes or {})
        self._graph = Graph(self.n_blocks, pairs)

    @property
    def adjacency(self):
        return self._graph.edge_set()

    def neighbors(self, j):
        return self._graph.neighbors(j)

    @property
    def graph(self):
        """The block graph as a :class:`Graph` on block ids."""
        return self._graph

    @property
    def pairwise_control_sum(self):
        """Sum of boundary sizes over block pairs (double-counts shared controls)."""
        return sum(self.boundary_sizes.values())

    def __repr__(self):
        return f"BlockGraph(N={self.n_blocks}, edges={len(self.pairs)})"


def block_graph(g, p):
    """Build the block adjacency of a valid partition.

    Blocks ``j`` and ``k`` are adjacent when some path runs from ``j`` to
    ``k`` through control vertices only, and every control on it other than
    the first and the last touches no block. This covers a single shared
    control, two touching layers of controls and thick control regions,
    but does not let the crossing point of two control layers merge
    diagonally opposite blocks into neighbors unless a block-free control
    lies between them.

    Raises
    ------
    PartitionError
        If `p` is not a valid partition of `g`.
    """
    validate_partition(g, p).raise_if_invalid()
    nb = p.n_blocks
    lab = p.labels(g.n)
    e = g.edges
    lu, lv = lab[e[:, 0]], lab[e[:, 1]]

    # (control, block) incidences, grouped by control.
    m1 = (lu == -1) & (lv >= 0)
    m2 = (lv == -1) & (lu >= 0)
    ctrl = np.concatenate([e[m1, 0], e[m2, 1]])
    blk = np.concatenate([lv[m1], lu[m2]])
    inc = np.unique(ctrl * max(nb, 1) + blk)
    ctrl, blk = inc // max(nb, 1), inc % max(nb, 1)
    touch = np.bincount(ctrl, minlength=g.n)
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(touch, out=ptr[1:])

    direct = _pairs_within(ctrl, blk, nb)
    keys = [direct]

    cc = e[(lu == -1) & (lv == -1)]
    touching = (touch[cc[:, 0]] > 0) & (touch[cc[:, 1]] > 0)
    keys.append(_cross_pairs(ptr, blk, cc[touching, 0], cc[touching, 1], nb))

    free = (lab == -1) & (touch == 0)
    if free.any():
        flab, _ = component_labels(g, free)
        # touching controls adjacent to a free region
        a = np.concatenate([cc[:, 0], cc[:, 1]])
        b = np.concatenate([cc[:, 1], cc[:, 0]])
        sel = free[a] & (touch[b] > 0)
        region, port = flab[a[sel]], b[sel]
        reps = touch[port]
        region = np.repeat(region, reps)
        starts = np.repeat(ptr[port], reps)
        within = np.arange(len(starts)) - np.repeat(np.cumsum(reps) - reps, reps)
        members = blk[starts + within]
        rb = np.unique(region * max(nb, 1) + members)
        keys.append(_pairs_within(rb // max(nb, 1), rb % max(nb, 1), nb))

    allkeys = np.unique(np.concatenate(keys)) if nb else np.empty(0, dtype=np.int64)
    pairs = np.stack([allkeys // max(nb, 1), allkeys % max(nb, 1)], axis=1)
    dk, dc = np.unique(direct, return_counts=True)
    boundary = {(int(k // nb), int(k % nb)): int(c) for k, c in zip(dk, dc)}
    return BlockGraph(nb, pairs, boundary)


def _bfs_distances(a, src):
    """Hop distances from `src` in a connected symmetric CSR graph.

    Depths are read off the breadth-first predecessor tree by pointer
    jumping, which is much cheaper than a general shortest-path call.
    """
    _, pred = csgraph.breadth_first_order(a, src, directed=True, return_predecessors=True)
    par = pred.astype(np.int64)
    par[src] = src
    depth = (np.arange(len(par)) != src).astype(np.int64)
    while True:
        up = par[par]
        if np.array_equal(up, par):
            return depth
        depth = depth + depth[par]
        par = up


def diameter(bg):
    """Largest shortest-path distance between blocks.

    Returns ``0`` for zero or one block and ``math.inf`` when the block graph
    is disconnected. Exact: eccentricity bounds from a few breadth-first
    searches are tightened until the lower and upper diameter bounds meet
    (Takes and Kosters, 2011), which on grid-like block graphs needs far
    fewer searches than all pairs.
    """
    n = bg.n_blocks
    if n <= 1:
        return 0
    a = bg.graph.adjacency()
    ncomp, _ = csgraph.connected_components(a, directed=False)
    if ncomp > 1:
        return math.inf
    deg = np.diff(a.indptr).astype(np.int64)
    maxdeg = int(deg.max())
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, n, dtype=np.int64)
    live = np.ones(n, dtype=bool)
    d_lo, d_hi = 0, n
    pick_high = False
    while d_lo < d_hi and live.any():
        # alternate: largest upper bound, then smallest lower bound; ties go to
        # higher degree, then lower id (argmax keeps the first maximum)
        bound = hi if pick_high else n - lo
        score = np.where(live, bound * (maxdeg + 1) + deg, -1)
        v = int(np.argmax(score))
        pick_high = not pick_high
        dist = _bfs_distances(a, v)
        ecc = int(dist.max())
        d_lo = max(d_lo, ecc)
        lo = np.maximum(lo, np.maximum(dist, ecc - dist))
        hi = np.minimum(hi, ecc + dist)
        d_hi = int(hi.max())
        live[v] = False
        # a vertex whose eccentricity cannot beat d_lo is no longer useful
        live &= hi > d_lo
    return d_lo
