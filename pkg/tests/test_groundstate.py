from collections import Counter
import math

import numpy as np
import pytest

from ecgraphs import Partition, build_graph, build_hamiltonian
from ecgraphs.exceptions import ParameterError, PartitionError, SizeCapError
from ecgraphs.families import gen_chain, grid_graph
from ecgraphs.groundstate import (approx_ground_energy, cluster_ground_energy, decouple,
                                  exact_ground_energy)
from ecgraphs.hamiltonian import Hamiltonian, PauliOperator, Term, dense_matrix
from ecgraphs.partitioner import delta_removal_partition, grow_blocks

PAULI = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
         "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}


def kron_oracle(terms, k):
    """Dense matrix with qubit q as bit q of the basis index, built by np.kron."""
    mat = np.zeros((2 ** k, 2 ** k), dtype=complex)
    for t in terms:
        labels = dict(zip(t.sites, t.ops))
        op = np.ones((1, 1))
        for q in range(k):
            # the later factor of np.kron is the less significant bit
            op = np.kron(PAULI[labels.get(q, "I")], op)
        mat += t.coeff * op
    return mat


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def random_terms(rng, k, count):
    terms = []
    for _ in range(count):
        if k > 1 and rng.random() < 0.6:
            s = tuple(int(v) for v in rng.choice(k, 2, replace=False))
            ops = "".join(rng.choice(list("XYZ"), 2))
        else:
            s = (int(rng.integers(k)),)
            ops = str(rng.choice(list("XYZ")))
        terms.append(Term(s, ops, float(rng.uniform(-1, 1))))
    return terms


class TestModels:
    def test_ising_counts(self):
        h = build_hamiltonian(path(3), "ising-zz", J=1.0)
        assert len(h) == 2 and all(t.coeff == -1 for t in h.terms)

    def test_transverse_counts(self):
        h = build_hamiltonian(path(3), "transverse-ising", J=1.0, h=0.5)
        assert Counter(len(t.sites) for t in h.terms) == {2: 2, 1: 3}

    def test_random_deterministic(self):
        g = grid_graph(3, 2)
        assert build_hamiltonian(g, "random", seed=4).terms == \
            build_hamiltonian(g, "random", seed=4).terms
        assert build_hamiltonian(g, "random", seed=4).terms != \
            build_hamiltonian(g, "random", seed=5).terms

    def test_unknown_model(self):
        with pytest.raises(ParameterError):
            build_hamiltonian(path(3), "potts")

    def test_term_off_graph(self):
        with pytest.raises(ParameterError):
            Hamiltonian(3, [Term((0, 2), "ZZ", 1.0)], path(3))

    @pytest.mark.parametrize("args", [((0,), "XY", 1.0), ((0, 0), "XX", 1.0),
                                      ((0,), "W", 1.0), ((0,), "X", math.inf)])
    def test_bad_term(self, args):
        with pytest.raises(ParameterError):
            Term(*args)


class TestOperator:
    def test_dense_matches_kron_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            k = int(rng.integers(1, 6))
            terms = random_terms(rng, k, int(rng.integers(1, 12)))
            assert np.allclose(dense_matrix(terms, k), kron_oracle(terms, k), atol=1e-13)

    def test_matvec_matches_kron_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(60):
            k = int(rng.integers(1, 7))
            terms = random_terms(rng, k, int(rng.integers(1, 15)))
            op = PauliOperator(terms, k)
            psi = rng.standard_normal(2 ** k) + 1j * rng.standard_normal(2 ** k)
            assert np.allclose(op.matvec(psi), kron_oracle(terms, k) @ psi, atol=1e-12)

    def test_hermitian(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            m = dense_matrix(random_terms(rng, 4, 10), 4)
            assert np.abs(m - m.conj().T).max() < 1e-14

    def test_bit_convention(self):
        # Z on qubit 0 flips sign on odd indices
        m = dense_matrix([Term((0,), "Z", 1.0)], 2)
        assert np.diag(m).tolist() == [1, -1, 1, -1]


class TestClusterEnergy:
    def test_single_x(self):
        assert cluster_ground_energy([Term((0,), "X", -1.0)], 1) == pytest.approx(-1)

    def test_heisenberg_singlet(self):
        terms = [Term((0, 1), op, 1.0) for op in ("XX", "YY", "ZZ")]
        by_hand = np.array([[1, 0, 0, 0], [0, -1, 2, 0], [0, 2, -1, 0], [0, 0, 0, 1]])
        assert np.linalg.eigvalsh(by_hand)[0] == pytest.approx(-3)
        for method in ("dense", "iterative"):
            assert cluster_ground_energy(terms, 2, method) == pytest.approx(-3, abs=1e-9)

    def test_ising_path(self):
        terms = list(build_hamiltonian(path(3), "ising-zz").terms)
        assert cluster_ground_energy(terms, 3) == pytest.approx(-2)

    def test_empty(self):
        assert cluster_ground_energy([], 3) == 0.0

    def test_caps(self):
        with pytest.raises(SizeCapError):
            cluster_ground_energy([Term((0,), "Z", 1.0)], 15, "dense")
        with pytest.raises(SizeCapError):
            cluster_ground_energy([Term((0,), "Z", 1.0)], 27, "iterative")

    def test_unknown_method(self):
        with pytest.raises(ParameterError):
            cluster_ground_energy([Term((0,), "Z", 1.0)], 1, "qr")

    def test_dense_vs_iterative(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            k = int(rng.integers(1, 9))
            terms = random_terms(rng, k, int(rng.integers(1, 3 * k + 2)))
            a = cluster_ground_energy(terms, k, "dense")
            b = cluster_ground_energy(terms, k, "iterative")
            assert abs(a - b) <= 1e-8
            assert isinstance(a, float) and isinstance(b, float)

    def test_iterative_larger(self):
        # open transverse Ising chain at h = J, solved exactly by free fermions
        k = 16
        h = build_hamiltonian(path(k), "transverse-ising")
        e = cluster_ground_energy(list(h.terms), k, "iterative")
        # ground energy is minus the sum of singular values of the coupling matrix
        a = np.diag(np.full(k, 1.0)) + np.diag(np.full(k - 1, 1.0), 1)
        eps = np.linalg.svd(a, compute_uv=False)
        assert e == pytest.approx(-eps.sum(), abs=1e-8)


class TestDecouple:
    def test_five_path(self):
        h = build_hamiltonian(path(5), "ising-zz")
        dec = decouple(h, Partition([[0, 1], [3, 4]], [2]))
        assert {t.sites for t in dec.removed_terms} == {(1, 2), (2, 3)}
        assert dec.removed_norm == 2

    def test_single_block(self):
        h = build_hamiltonian(path(4), "heisenberg")
        dec = decouple(h, Partition([[0, 1, 2, 3]]))
        assert dec.removed_terms == [] and dec.removed_norm == 0

    def test_all_controls(self):
        h = build_hamiltonian(path(4), "transverse-ising")
        p = Partition([], [0, 1, 2, 3])
        assert len(decouple(h, p).removed_terms) == len(h)
        assert approx_ground_energy(h, p).e_approx == 0

    def test_control_site_terms_removed(self):
        h = build_hamiltonian(path(3), "transverse-ising")
        dec = decouple(h, Partition([[0], [2]], [1]))
        assert Term((1,), "X", -1.0) in dec.removed_terms

    def test_term_partition_exact(self):
        rng = np.random.default_rng(4)
        for s in range(30):
            g = grid_graph(4, 2)
            h = build_hamiltonian(g, "random", seed=s)
            p = delta_removal_partition(g, float(rng.uniform(0.1, 0.6)), s)
            dec = decouple(h, p)
            rebuilt = Counter(dec.removed_terms) + Counter(dec.as_hamiltonian().terms)
            assert rebuilt == Counter(h.terms)
            for b, local in zip(dec.blocks, dec.cluster_terms):
                for t in local:
                    assert all(0 <= q < len(b) for q in t.sites)

    def test_uncovered(self):
        h = build_hamiltonian(path(3), "ising-zz")
        with pytest.raises(PartitionError):
            decouple(h, Partition([[0]], [1]))


class TestApprox:
    def test_five_path(self):
        h = build_hamiltonian(path(5), "ising-zz")
        r = approx_ground_energy(h, Partition([[0, 1], [3, 4]], [2]), exact=True)
        assert r.e_approx == pytest.approx(-2) and r.bound == 2
        assert r.e_exact == pytest.approx(-4) and r.gap <= r.bound + 1e-12

    def test_exact_examples(self):
        assert exact_ground_energy(Hamiltonian(1, [Term((0,), "Z", -1.0)])) == pytest.approx(-1)
        assert exact_ground_energy(build_hamiltonian(path(2), "heisenberg")) == pytest.approx(-3)
        assert exact_ground_energy(build_hamiltonian(path(4), "ising-zz")) == pytest.approx(-3)

    def test_oversized_block_named(self):
        g, p = gen_chain(2, 16)
        h = build_hamiltonian(g, "ising-zz")
        with pytest.raises(SizeCapError, match="block 0"):
            approx_ground_energy(h, p, method="dense")

    def test_bound_on_instances(self):
        rng = np.random.default_rng(6)
        models = ("ising-zz", "transverse-ising", "heisenberg", "random")
        for s in range(40):
            g = grid_graph(3, 2) if s % 2 else path(int(rng.integers(4, 11)))
            h = build_hamiltonian(g, models[s % 4], seed=s)
            p = grow_blocks(g, int(rng.integers(1, 5)))
            r = approx_ground_energy(h, p, exact=True)
            assert r.gap <= r.bound + 1e-9
            assert r.e_exact <= r.e_approx + 1e-9

    def test_additivity(self):
        for s in range(10):
            g = grid_graph(3, 2)
            h = build_hamiltonian(g, "random", seed=s)
            p = delta_removal_partition(g, 0.3, s)
            r = approx_ground_energy(h, p)
            full = exact_ground_energy(decouple(h, p).as_hamiltonian(), "dense")
            assert r.e_approx == pytest.approx(full, abs=1e-9)

    def test_workers_bitwise(self):
        g = grid_graph(5, 2)
        h = build_hamiltonian(g, "random", seed=1)
        p = grow_blocks(g, 4)
        assert approx_ground_energy(h, p).e_approx == \
            approx_ground_energy(h, p, workers=4).e_approx

    def test_eps_n_bound_reported(self):
        g, p = gen_chain(3, 4)
        r = approx_ground_energy(build_hamiltonian(g, "ising-zz"), p)
        assert r.eps_n_bound == 2 * 1 * 2 and r.control_fraction == pytest.approx(2 / 11)
