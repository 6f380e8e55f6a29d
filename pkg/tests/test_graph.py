import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ecgraphs import (Graph, Partition, block_graph, build_graph, connected_components,
                      diameter, validate_partition)
from ecgraphs.exceptions import GraphError, PartitionError
from ecgraphs.families import gen_chain, gen_lattice
from ecgraphs.graph import BlockGraph, component_labels
from ecgraphs.io import (format_edge_list, format_partition, parse_edge_list,
                         parse_partition)
from ecgraphs.partitioner import delta_removal_partition, grow_blocks


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def random_graph(rng, n, p):
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < p
    return Graph(n, np.stack([iu[0][keep], iu[1][keep]], axis=1))


def union_find_components(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), set()).add(v)
    return sorted(groups.values(), key=min)


def brute_block_adjacency(g, p):
    """Blocks j, k adjacent iff a control path joins them whose interior
    controls touch no block."""
    lab = p.labels(g.n)
    nbrs = [set(g.neighbors(v).tolist()) for v in range(g.n)]
    touches = {c: {int(lab[u]) for u in nbrs[c] if lab[u] >= 0} for c in p.controls.tolist()}
    adj = set()
    for c in touches:
        for b in touches:
            if b != c and not _walk_ok(c, b, nbrs, lab, touches):
                continue
            for j in touches[c]:
                for k in touches[b]:
                    if j != k:
                        adj.add((min(j, k), max(j, k)))
    return adj


def _walk_ok(c, b, nbrs, lab, touches):
    # control path c -> b whose interior avoids block-touching controls
    seen, stack = {c}, [c]
    while stack:
        a = stack.pop()
        for x in nbrs[a]:
            if lab[x] != -1 or x in seen:
                continue
            if x == b:
                return True
            if not touches[x]:
                seen.add(x)
                stack.append(x)
    return False


class TestBuildGraph:
    def test_path(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        assert g.n == 3 and g.num_edges == 2

    def test_dedup(self):
        assert build_graph(2, [(0, 1), (1, 0)]).num_edges == 1

    def test_out_of_range(self):
        with pytest.raises(GraphError):
            build_graph(2, [(0, 2)])

    def test_self_loop(self):
        with pytest.raises(GraphError):
            build_graph(3, [(1, 1)])

    def test_negative_endpoint(self):
        with pytest.raises(GraphError):
            build_graph(3, [(-1, 1)])

    def test_edges_read_only(self):
        g = path(4)
        with pytest.raises(ValueError):
            g.edges[0, 0] = 3


class TestComponents:
    def test_connected_path(self):
        assert [set(c.tolist()) for c in connected_components(path(3))] == [{0, 1, 2}]

    def test_isolated(self):
        comps = connected_components(build_graph(3, []))
        assert [set(c.tolist()) for c in comps] == [{0}, {1}, {2}]

    def test_two_pairs(self):
        comps = connected_components(build_graph(4, [(0, 1), (2, 3)]))
        assert [set(c.tolist()) for c in comps] == [{0, 1}, {2, 3}]

    def test_union_find_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            n = int(rng.integers(1, 201))
            g = random_graph(rng, n, float(rng.uniform(0, 3 / n)))
            comps = [set(c.tolist()) for c in connected_components(g)]
            assert comps == union_find_components(n, g.edges.tolist())
            assert sum(len(c) for c in comps) == n

    def test_active_mask_marks_inactive(self):
        labels, count = component_labels(path(5), np.array([1, 1, 0, 1, 1], bool))
        assert count == 2 and labels.tolist() == [0, 0, -1, 1, 1]


class TestValidate:
    def test_separator_ok(self):
        assert validate_partition(path(5), Partition([[0, 1], [3, 4]], [2])).ok

    def test_inter_block_edge(self):
        v = validate_partition(path(5), Partition([[0, 1], [2, 3, 4]], []))
        assert "inter-block edge (1,2)" in v.violations

    def test_uncovered(self):
        v = validate_partition(path(5), Partition([[0, 1], [4]], [2]))
        assert "vertex 3 uncovered" in v.violations

    def test_double_assignment(self):
        v = validate_partition(path(3), Partition([[0, 1], [2]], [1]))
        assert not v.ok and any("more than one" in s for s in v.violations)

    def test_disconnected_block(self):
        v = validate_partition(path(3), Partition([[0, 2]], [1]))
        assert any("disconnected" in s for s in v.violations)

    def test_only_empty_blocks(self):
        v = validate_partition(path(3), Partition([[]], [0, 1, 2]))
        assert v.violations == ["block 0 is empty"]

    def test_raise(self):
        with pytest.raises(PartitionError):
            validate_partition(path(3), Partition([[0], [1, 2]])).raise_if_invalid()

    def test_removing_controls_leaves_blocks(self):
        rng = np.random.default_rng(5)
        for t in range(200):
            n = int(rng.integers(2, 120))
            g = random_graph(rng, n, float(rng.uniform(0.5 / n, 4 / n)))
            p = (grow_blocks(g, int(rng.integers(1, 8))) if t % 2
                 else delta_removal_partition(g, 0.3, t))
            assert validate_partition(g, p).ok
            rest = np.ones(n, bool)
            rest[p.controls] = False
            labels, count = component_labels(g, rest)
            comps = sorted((set(np.flatnonzero(labels == i).tolist()) for i in range(count)),
                           key=min)
            assert comps == [set(b.tolist()) for b in p.blocks]


class TestBlockGraph:
    def test_single_separator(self):
        bg = block_graph(path(5), Partition([[0, 1], [3, 4]], [2]))
        assert bg.adjacency == {(0, 1)} and bg.boundary_sizes == {(0, 1): 1}

    def test_chain_is_path(self):
        g, p = gen_chain(3, 4)
        bg = block_graph(g, p)
        assert bg.adjacency == {(0, 1), (1, 2)} and diameter(bg) == 2

    def test_star_triangle(self):
        g = build_graph(4, [(0, 1), (0, 2), (0, 3)])
        bg = block_graph(g, Partition([[1], [2], [3]], [0]))
        assert bg.adjacency == {(0, 1), (0, 2), (1, 2)}
        assert bg.pairwise_control_sum == 3

    def test_control_layer_pair(self):
        # two touching controls between blocks 0 and 1
        g = path(6)
        bg = block_graph(g, Partition([[0, 1], [4, 5]], [2, 3]))
        assert bg.adjacency == {(0, 1)} and bg.boundary_sizes == {}

    def test_thick_layer(self):
        g = path(7)
        bg = block_graph(g, Partition([[0, 1], [5, 6]], [2, 3, 4]))
        assert bg.adjacency == {(0, 1)}

    def test_lattice_king_graph(self):
        g, p = gen_lattice(2, 2, 4)
        bg = block_graph(g, p)
        assert len(bg.adjacency) == 6
        g, p = gen_lattice(2, 3, 4)
        assert diameter(block_graph(g, p)) == 2

    def test_invalid_partition(self):
        with pytest.raises(PartitionError):
            block_graph(path(3), Partition([[0], [1, 2]]))

    def test_symmetric_irreflexive(self):
        rng = np.random.default_rng(2)
        for t in range(50):
            g = random_graph(rng, 60, 0.05)
            bg = block_graph(g, delta_removal_partition(g, 0.4, t))
            assert all(j < k for j, k in bg.adjacency)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(8)
        for t in range(300):
            n = int(rng.integers(3, 40))
            g = random_graph(rng, n, float(rng.uniform(1 / n, 5 / n)))
            p = (delta_removal_partition(g, float(rng.uniform(0.2, 0.7)), t) if t % 2
                 else grow_blocks(g, int(rng.integers(1, 5))))
            assert block_graph(g, p).adjacency == brute_block_adjacency(g, p)


class TestDiameter:
    def test_path_blocks(self):
        assert diameter(BlockGraph(5, [(i, i + 1) for i in range(4)])) == 4

    def test_single(self):
        assert diameter(BlockGraph(1, [])) == 0

    def test_complete(self):
        assert diameter(BlockGraph(6, list(itertools.combinations(range(6), 2)))) == 1

    def test_disconnected(self):
        assert math.isinf(diameter(BlockGraph(2, [])))

    def test_matches_all_pairs_bfs(self):
        rng = np.random.default_rng(4)
        for t in range(150):
            n = int(rng.integers(2, 120))
            kind = t % 3
            if kind == 0:
                pairs = [(int(rng.integers(i)), i) for i in range(1, n)]
            elif kind == 1:
                pairs = [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(0, 1)]
            else:
                g = random_graph(rng, n, float(rng.uniform(1 / n, 4 / n)))
                pairs = g.edges.tolist()
            bg = BlockGraph(n, [(min(a, b), max(a, b)) for a, b in pairs])
            nbrs = [[] for _ in range(n)]
            for a, b in pairs:
                nbrs[a].append(b)
                nbrs[b].append(a)
            best = 0
            for src in range(n):
                dist = {src: 0}
                queue = [src]
                for a in queue:
                    for b in nbrs[a]:
                        if b not in dist:
                            dist[b] = dist[a] + 1
                            queue.append(b)
                best = max(best, max(dist.values())) if len(dist) == n else math.inf
                if best == math.inf:
                    break
            assert diameter(bg) == best

    def test_chain_equality_and_bound(self):
        for N in (2, 5, 17):
            g, p = gen_chain(N, 3)
            assert diameter(block_graph(g, p)) == N - 1


edge_lists = st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                         .filter(lambda e: e[0] != e[1]), max_size=60)))


@settings(max_examples=200, deadline=None)
@given(edge_lists)
def test_edge_list_round_trip(data):
    n, edges = data
    g = Graph(n, edges)
    text = format_edge_list(g)
    assert parse_edge_list(text) == g
    assert format_edge_list(parse_edge_list(text)) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.integers(0, 10 ** 6))
def test_partition_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    labels = rng.integers(-1, 4, n)
    p = Partition.from_labels(labels)
    text = format_partition(p)
    assert parse_partition(text) == p
    assert format_partition(parse_partition(text)) == text


@pytest.mark.parametrize("text", ["", "3", "3 1\n0 5\n", "2 2\n0 1\n", "x y\n", "-1 0\n",
                                  "2 1\n0 1 1\n", "2 1\n0 0\n"])
def test_parse_edge_list_rejects(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


@pytest.mark.parametrize("text", ["", "block 0: 1\n", "controls: a\n",
                                  "controls:\nblock 1: 0\n", "controls:\nblock 0: x\n"])
def test_parse_partition_rejects(text):
    with pytest.raises(PartitionError):
        parse_partition(text)
