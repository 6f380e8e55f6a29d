"""Seeded generators for the graph families studied here.

Randomness comes from :func:`numpy.random.default_rng` (PCG64) seeded with
the user's 64-bit seed. Stream order is fixed: site masks draw one uniform
per vertex in vertex-id (row-major) order; the configuration model draws the
degree sequence first and then a single permutation of the stub array, pairing
consecutive permuted stubs.
"""

from dataclasses import dataclass, asdict
import math

import numpy as np

from .exceptions import ParameterError
from .graph import Graph, Partition, component_labels, largest_component

__all__ = [
    "FamilySpec",
    "gen_chain",
    "gen_lattice",
    "gen_sierpinski",
    "sierpinski_partition",
    "gen_percolated_lattice",
    "gen_erdos_renyi",
    "gen_scale_free",
    "scale_free_degrees",
    "gen_complete_blocks",
    "estimate_pc",
    "grid_graph",
]

KINDS = ("chain", "lattice", "sierpinski", "percolated-lattice", "erdos-renyi",
         "scale-free", "complete-blocks")
_FIELDS = {
    "chain": ("N", "L"),
    "lattice": ("d", "N", "L"),
    "sierpinski": ("k", "level"),
    "percolated-lattice": ("d", "side", "p", "seed"),
    "erdos-renyi": ("n", "p", "mean_degree", "seed"),
    "scale-free": ("n", "alpha", "kmin", "seed"),
    "complete-blocks": ("N", "L", "beta"),
}


def _check(cond, msg):
    if not cond:
        raise ParameterError(msg)


def _grid_edges(side, d):
    shape = (side,) * d
    ids = np.arange(side ** d, dtype=np.int64).reshape(shape)
    parts = []
    for axis in range(d):
        lo = np.take(ids, np.arange(side - 1), axis=axis).ravel()
        hi = np.take(ids, np.arange(1, side), axis=axis).ravel()
        parts.append(np.stack([lo, hi], axis=1))
    return np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)


def grid_graph(side, d=2):
    """Open-boundary nearest-neighbor grid with ``side**d`` sites, row-major ids."""
    _check(side >= 1 and d >= 1, "grid needs side >= 1 and d >= 1")
    return Graph(side ** d, _grid_edges(side, d))


def gen_chain(N, L):
    """Path of ``N*L - 1`` spins cut into `N` blocks of ``L - 1`` by single controls.

    Controls sit at positions ``k*L - 1`` for ``k = 1 .. N-1``.
    """
    _check(N >= 1 and L >= 2, f"chain needs N >= 1 and L >= 2, got N={N}, L={L}")
    n = N * L - 1
    v = np.arange(n - 1, dtype=np.int64)
    g = Graph(n, np.stack([v, v + 1], axis=1), _canonical=True)
    blocks = [np.arange(k * L, k * L + L - 1) for k in range(N)]
    controls = np.arange(1, N) * L - 1
    return g, Partition(blocks, controls)


def gen_lattice(d, N, L):
    """`d`-dimensional grid of side ``N*L - 1`` with ``N**d`` cubic blocks of side ``L - 1``.

    Every site with some coordinate congruent to ``L - 1`` modulo `L` is a
    control, so neighboring blocks are separated by a ``(d-1)``-dimensional
    layer.
    """
    _check(d >= 1 and N >= 1 and L >= 2,
           f"lattice needs d >= 1, N >= 1, L >= 2, got d={d}, N={N}, L={L}")
    side = N * L - 1
    g = grid_graph(side, d)
    coords = np.unravel_index(np.arange(g.n), (side,) * d)
    ctrl = np.zeros(g.n, dtype=bool)
    for c in coords:
        ctrl |= (c % L) == L - 1
    labels = np.ravel_multi_index(tuple(c // L for c in coords), (N,) * d).astype(np.int64)
    labels[ctrl] = -1
    return g, Partition.from_labels(labels)


def _gasket(k):
    corners = np.array([[[0, 0], [2 ** k, 0], [0, 2 ** k]]], dtype=np.int64)
    for _ in range(k):
        a, b, c = corners[:, 0], corners[:, 1], corners[:, 2]
        ab, ac, bc = (a + b) // 2, (a + c) // 2, (b + c) // 2
        children = np.stack([np.stack([a, ab, ac], 1), np.stack([ab, b, bc], 1),
                             np.stack([ac, bc, c], 1)], axis=1)
        corners = children.reshape(-1, 3, 2)
    side = 2 ** k + 1
    keys = corners[..., 0] * side + corners[..., 1]
    uniq, tri = np.unique(keys.ravel(), return_inverse=True)
    return len(uniq), tri.reshape(-1, 3)


def gen_sierpinski(k):
    """Graph of the depth-`k` Sierpinski gasket (``k = 0`` is a triangle).

    Vertices are numbered by their lattice coordinates, so the graph is
    unique for each `k`.
    """
    _check(k >= 0, f"depth must be >= 0, got {k}")
    n, tri = _gasket(k)
    edges = np.concatenate([tri[:, [0, 1]], tri[:, [0, 2]], tri[:, [1, 2]]])
    return Graph(n, edges)


def sierpinski_partition(k, level):
    """Gasket of depth `k` split into its depth-`level` sub-gaskets.

    Corner vertices shared by two sub-gaskets become controls; each
    sub-gasket minus its shared corners is a block.
    """
    _check(1 <= level <= k, f"need 1 <= level <= k, got level={level}, k={k}")
    g = gen_sierpinski(k)
    _, tri = _gasket(k)
    group = np.repeat(np.arange(len(tri)) // 3 ** level, 3)
    pairs = np.unique(tri.ravel() * (len(tri) + 1) + group)
    vert, grp = pairs // (len(tri) + 1), pairs % (len(tri) + 1)
    shared = np.bincount(vert, minlength=g.n) > 1
    labels = np.full(g.n, -1, dtype=np.int64)
    labels[vert] = grp
    labels[shared] = -1
    return g, Partition.from_labels(labels)


def gen_percolated_lattice(side, d, p, seed):
    """Site-diluted grid: each site kept with probability `p`.

    Returns the graph on the full id space (removed sites are isolated) and
    the boolean mask of kept sites.
    """
    _check(0 <= p <= 1, f"site probability must lie in [0, 1], got {p}")
    _check(side >= 1 and d >= 1, "grid needs side >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    kept = rng.random(side ** d) < p
    e = _grid_edges(side, d)
    e = e[kept[e[:, 0]] & kept[e[:, 1]]]
    return Graph(side ** d, e), kept


def gen_erdos_renyi(n, p, seed):
    """G(n, p) random graph.

    The edge count is drawn as ``Binomial(n(n-1)/2, p)`` and that many
    distinct pairs are chosen uniformly, which has the same law as flipping
    every pair independently.
    """
    _check(0 <= p <= 1, f"edge probability must lie in [0, 1], got {p}")
    _check(n >= 0, "vertex count must be non-negative")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    m = int(rng.binomial(total, p)) if total else 0
    t = np.sort(rng.choice(total, size=m, replace=False)) if m else np.empty(0, np.int64)
    rows = np.arange(n, dtype=np.int64)
    starts = rows * (2 * n - rows - 1) // 2
    i = np.searchsorted(starts, t, side="right") - 1
    j = t - starts[i] + i + 1
    return Graph(n, np.stack([i, j], axis=1).astype(np.int64), _canonical=True)


def _sample_degrees(rng, n, alpha, kmin):
    kmax = min(n - 1, max(kmin, math.ceil(math.sqrt(n))))
    ks = np.arange(kmin, kmax + 1)
    w = ks.astype(float) ** -float(alpha)
    deg = rng.choice(ks, size=n, p=w / w.sum()).astype(np.int64)
    if deg.sum() % 2:
        low = np.flatnonzero(deg < kmax)
        high = np.flatnonzero(deg > kmin)
        if len(low):
            deg[low[0]] += 1
        elif len(high):
            deg[high[0]] -= 1
        else:
            raise ParameterError(f"{n} vertices of degree {kmin} cannot be paired")
    return deg


def _check_scale_free(n, alpha, kmin):
    _check(alpha > 1, f"degree exponent must exceed 1, got {alpha}")
    _check(1 <= kmin < n, f"need 1 <= kmin < n, got kmin={kmin}, n={n}")


def scale_free_degrees(n, alpha, kmin, seed):
    """The degree sequence :func:`gen_scale_free` draws for the same arguments."""
    _check_scale_free(n, alpha, kmin)
    return _sample_degrees(np.random.default_rng(seed), n, alpha, kmin)


def gen_scale_free(n, alpha, kmin, seed):
    """Configuration-model graph with power-law degrees ``P(k) ~ k**-alpha``.

    Degrees are drawn on ``[kmin, ceil(sqrt(n))]``; stubs are matched by a
    random permutation, self-loops and repeated edges are dropped, and the
    largest connected component is returned with contiguous ids.
    """
    _check_scale_free(n, alpha, kmin)
    rng = np.random.default_rng(seed)
    deg = _sample_degrees(rng, n, alpha, kmin)
    stubs = np.repeat(np.arange(n, dtype=np.int64), deg)
    stubs = stubs[rng.permutation(len(stubs))]
    u, v = stubs[0::2], stubs[1::2]
    keep = u != v
    if not keep.any():
        raise ParameterError("degree sequence produced no edges")
    g, _ = largest_component(Graph(n, np.stack([u[keep], v[keep]], axis=1)))
    return g


def gen_complete_blocks(N, L, beta=0.5):
    """`N` path blocks of `L` spins where every pair of blocks shares a boundary.

    Each pair ``(j, k)`` gets ``ceil(L**(1-beta) / (N-1))`` private control
    vertices, each wired to one spin of block `j` and one of block `k`.
    """
    _check(N >= 1 and L >= 1, f"need N >= 1 and L >= 1, got N={N}, L={L}")
    _check(0 < beta < 1, f"beta must lie in (0, 1), got {beta}")
    per_pair = math.ceil(L ** (1 - beta) / (N - 1)) if N > 1 else 0
    edges = []
    for j in range(N):
        edges.extend((j * L + t, j * L + t + 1) for t in range(L - 1))
    nxt = N * L
    controls = []
    for j in range(N):
        for k in range(j + 1, N):
            for r in range(per_pair):
                edges.append((nxt, j * L + (k + r) % L))
                edges.append((nxt, k * L + (j + r) % L))
                controls.append(nxt)
                nxt += 1
    blocks = [np.arange(j * L, (j + 1) * L) for j in range(N)]
    return Graph(nxt, edges), Partition(blocks, controls)


def estimate_pc(side, d, trials, seed, tol=0.01):
    """Bisect for the site probability at which the largest kept cluster
    holds half of the kept sites, averaged over `trials` samples.

    Each trial fixes one uniform per site (seeded by ``(seed, trial)``), so
    all bisection steps see the same coupled samples.
    """
    _check(side >= 16, f"side must be >= 16, got {side}")
    _check(trials >= 1, f"trials must be >= 1, got {trials}")
    g = grid_graph(side, d)
    draws = [np.random.default_rng([seed, t]).random(g.n) for t in range(trials)]

    def spanning_fraction(p):
        fr = []
        for u in draws:
            kept = u < p
            total = int(kept.sum())
            if total == 0:
                fr.append(0.0)
                continue
            labels, count = component_labels(g, kept)
            fr.append(np.bincount(labels[kept], minlength=count).max() / total)
        return float(np.mean(fr))

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if spanning_fraction(mid) >= 0.5:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class FamilySpec:
    """A graph family and its parameters.

    Only the fields relevant to `kind` are read. For scans the size index
    replaces ``N`` (chain, lattice, complete-blocks), ``k`` (sierpinski),
    ``side`` (percolated-lattice) or ``n`` (erdos-renyi, scale-free).
    """

    kind: str
    d: int = 1
    N: int = None
    L: int = None
    k: int = None
    level: int = None
    side: int = None
    n: int = None
    p: float = None
    mean_degree: float = None
    alpha: float = None
    kmin: int = 1
    beta: float = 0.5
    seed: int = 0

    def __post_init__(self):
        _check(self.kind in KINDS, f"unknown family kind {self.kind!r}")
        _check(self.d >= 1, f"dimension must be >= 1, got {self.d}")
        if self.p is not None:
            _check(0 <= self.p <= 1, f"probability must lie in [0, 1], got {self.p}")
        if self.alpha is not None:
            _check(self.alpha > 1, f"degree exponent must exceed 1, got {self.alpha}")
        _check(self.kmin >= 1, f"kmin must be >= 1, got {self.kmin}")
        _check(0 <= self.seed < 2 ** 64, "seed must be a 64-bit unsigned integer")

    def to_dict(self):
        """Kind plus the parameters it uses (unset ones omitted)."""
        out = {"kind": self.kind}
        out.update((k, v) for k, v in asdict(self).items()
                   if k in _FIELDS[self.kind] and v is not None)
        return out

    def generate(self):
        """Build the graph and, where the family has one, its canonical partition.

        The percolated lattice is returned as its largest kept cluster,
        relabeled contiguously.
        """
        kind = self.kind
        if kind == "chain":
            return gen_chain(self.N, self.L)
        if kind == "lattice":
            return gen_lattice(self.d, self.N, self.L)
        if kind == "sierpinski":
            if self.level is not None:
                return sierpinski_partition(self.k, self.level)
            return gen_sierpinski(self.k), None
        if kind == "percolated-lattice":
            _check(self.p is not None and self.side is not None,
                   "percolated-lattice needs side and p")
            g, _ = gen_percolated_lattice(self.side, self.d, self.p, self.seed)
            g, _ = largest_component(g)
            return g, None
        if kind == "erdos-renyi":
            p = self.p
            if p is None:
                _check(self.mean_degree is not None, "erdos-renyi needs p or mean_degree")
                p = min(1.0, self.mean_degree / max(1, self.n - 1))
            return gen_erdos_renyi(self.n, p, self.seed), None
        if kind == "scale-free":
            _check(self.alpha is not None, "scale-free needs alpha")
            return gen_scale_free(self.n, self.alpha, self.kmin, self.seed), None
        return gen_complete_blocks(self.N, self.L, self.beta)
