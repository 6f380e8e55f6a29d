"""Spin-1/2 Hamiltonians as sums of one- and two-site Pauli terms.

Basis convention: qubit ``q`` is bit ``q`` of the basis-state index
(little-endian), so a state on ``k`` qubits is a vector of length ``2**k``.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.sparse as sp

from .exceptions import ParameterError

__all__ = ["Term", "Hamiltonian", "build_hamiltonian", "PauliOperator", "dense_matrix",
           "MODELS"]

MODELS = ("ising-zz", "transverse-ising", "heisenberg", "random")


@dataclass(frozen=True)
class Term:
    """``coeff * P_{sites[0]} (x) P_{sites[1]}`` with Pauli labels from ``ops``."""

    sites: tuple
    ops: str
    coeff: float

    def __post_init__(self):
        if len(self.sites) not in (1, 2) or len(self.ops) != len(self.sites):
            raise ParameterError(f"term needs 1 or 2 sites with one label each: {self}")
        if len(set(self.sites)) != len(self.sites):
            raise ParameterError(f"term acts twice on one site: {self}")
        if any(o not in "XYZ" for o in self.ops):
            raise ParameterError(f"Pauli labels must be X, Y or Z: {self.ops!r}")
        if not math.isfinite(self.coeff):
            raise ParameterError(f"non-finite coefficient in {self}")

    @property
    def norm(self):
        return abs(self.coeff)


class Hamiltonian:
    """A list of :class:`Term` on `n` qubits, optionally tied to an interaction graph.

    When `graph` is given every two-site term must act on one of its edges.
    """

    def __init__(self, n, terms, graph=None):
        self.n = int(n)
        self.terms = tuple(terms)
        self.graph = graph
        edges = graph.edge_set() if graph is not None else None
        for t in self.terms:
            if any(not 0 <= s < self.n for s in t.sites):
                raise ParameterError(f"term {t} acts outside [0, {self.n})")
            if edges is not None and len(t.sites) == 2 and tuple(sorted(t.sites)) not in edges:
                raise ParameterError(f"two-site term {t} is not on a graph edge")

    @property
    def norm_bound(self):
        """Sum of absolute coefficients; an upper bound on the operator norm."""
        return math.fsum(t.norm for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Hamiltonian(n={self.n}, terms={len(self.terms)})"


def build_hamiltonian(g, model, J=1.0, h=1.0, seed=0, low=-1.0, high=1.0):
    """Instantiate a spin model on the vertices and edges of `g`.

    ``ising-zz``: ``-J Z_i Z_j`` per edge. ``transverse-ising``: adds
    ``-h X_i`` per vertex. ``heisenberg``: ``J (X_i X_j + Y_i Y_j + Z_i Z_j)``
    per edge. ``random``: every edge carries ``XX``, ``YY``, ``ZZ`` and every
    vertex ``X``, ``Y``, ``Z``, each with an independent coefficient uniform
    on ``[low, high]``, drawn in that order (edges first, in edge order).
    """
    for name, val in (("J", J), ("h", h), ("low", low), ("high", high)):
        if not math.isfinite(val):
            raise ParameterError(f"{name} must be finite")
    edges = [(int(u), int(v)) for u, v in g.edges]
    terms = []
    if model == "ising-zz":
        terms = [Term(e, "ZZ", -J) for e in edges]
    elif model == "transverse-ising":
        terms = [Term(e, "ZZ", -J) for e in edges]
        terms += [Term((v,), "X", -h) for v in range(g.n)]
    elif model == "heisenberg":
        terms = [Term(e, op, J) for e in edges for op in ("XX", "YY", "ZZ")]
    elif model == "random":
        if low > high:
            raise ParameterError("random model needs low <= high")
        rng = np.random.default_rng(seed)
        c = rng.uniform(low, high, size=3 * len(edges) + 3 * g.n).tolist()
        it = iter(c)
        terms = [Term(e, op, next(it)) for e in edges for op in ("XX", "YY", "ZZ")]
        terms += [Term((v,), op, next(it)) for v in range(g.n) for op in "XYZ"]
    else:
        raise ParameterError(f"unknown model {model!r}; expected one of {MODELS}")
    return Hamiltonian(g.n, terms, g)


def _parity(idx, sites):
    par = np.zeros(len(idx), dtype=np.int64)
    for q in sites:
        par ^= (idx >> q) & 1
    return par


class PauliOperator:
    """Matrix-free action of a Pauli sum on ``2**k``-dimensional vectors.

    Terms sharing a bit-flip pattern are merged into one diagonal
    multiplier. Flipping the bits of ``xmask`` in every index is a reversal
    of the matching axes of the vector viewed as a ``(2,) * k`` tensor, so
    each pattern costs one strided pass rather than a gather.
    """

    def __init__(self, terms, k):
        self.k = k
        self.dim = 1 << k
        self.norm_bound = math.fsum(abs(t.coeff) for t in terms)
        odd_y = any(t.ops.count("Y") % 2 for t in terms)
        self.dtype = np.complex128 if odd_y else np.float64
        idx = np.arange(self.dim, dtype=np.int64)
        groups = {}
        for t in terms:
            xmask, zsites, ny = 0, [], 0
            for q, o in zip(t.sites, t.ops):
                if o in "XY":
                    xmask |= 1 << q
                if o in "ZY":
                    zsites.append(q)
                ny += o == "Y"
            # Y = i X Z, so the string is i**ny X^xmask Z^zmask
            phase = (1j) ** ny
            phase = phase.real if ny % 2 == 0 else phase
            diag = (1 - 2 * _parity(idx, zsites)) * (t.coeff * phase)
            if xmask in groups:
                groups[xmask] = groups[xmask] + diag
            else:
                groups[xmask] = diag.astype(self.dtype)
        self._shape = (2,) * k
        # axis a of the tensor view holds bit k - 1 - a
        self._groups = [(x, d, tuple(slice(None, None, -1) if x >> (k - 1 - a) & 1
                                     else slice(None) for a in range(k)))
                        for x, d in sorted(groups.items())]

    def matvec(self, psi):
        out = np.zeros(self.dim, dtype=np.result_type(self.dtype, psi.dtype))
        view = out.reshape(self._shape)
        for xmask, diag, flip in self._groups:
            if xmask == 0:
                out += diag * psi
            else:
                view += (diag * psi).reshape(self._shape)[flip]
        return out


_PAULI = {
    "I": sp.identity(2, format="csr", dtype=complex),
    "X": sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex)),
    "Y": sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex)),
    "Z": sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex)),
}


def dense_matrix(terms, k):
    """Full ``2**k x 2**k`` matrix assembled from Kronecker products of Pauli matrices."""
    dim = 1 << k
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for t in terms:
        labels = ["I"] * k
        for q, o in zip(t.sites, t.ops):
            labels[q] = o
        op = sp.identity(1, format="csr", dtype=complex)
        # highest qubit leftmost, so qubit q maps to bit q of the index
        for q in reversed(range(k)):
            op = sp.kron(op, _PAULI[labels[q]], format="csr")
        total = total + t.coeff * op
    mat = total.toarray()
    if not np.any(mat.imag):
        mat = mat.real.copy()
    return mat
