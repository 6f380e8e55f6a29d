"""Plain-text formats for graphs, partitions and Hamiltonians, plus JSON helpers.

Edge list::

    n m
    u v
    ...

Partition::

    controls: v1 v2 ...
    block 0: v1 v2 ...
    block 1: ...

Hamiltonian::

    n t
    coeff site:op [site:op]
    ...

All writers emit canonical text, so ``write(read(text)) == text`` for any
text a writer produced.
"""

from fractions import Fraction
import json
import math

import numpy as np

from .exceptions import EcGraphError, GraphError, PartitionError
from .graph import Graph, Partition
from .hamiltonian import Hamiltonian, Term

__all__ = [
    "format_edge_list", "parse_edge_list", "write_edge_list", "read_edge_list",
    "format_partition", "parse_partition", "write_partition", "read_partition",
    "format_hamiltonian", "parse_hamiltonian", "write_hamiltonian", "read_hamiltonian",
    "to_jsonable", "dumps_json", "write_json",
]

# largest vertex count accepted from text input
MAX_VERTICES = 10 ** 8


def _ints(tokens, what, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphError(f"line {lineno}: non-integer token in {what}") from None


def format_edge_list(g):
    lines = [f"{g.n} {g.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty edge list")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError("line 1: expected 'n m'")
    n, m = _ints(head, "header", 1)
    if n < 0 or m < 0:
        raise GraphError("line 1: counts must be non-negative")
    if n > MAX_VERTICES:
        raise GraphError(f"line 1: vertex count {n} exceeds {MAX_VERTICES}")
    if len(lines) - 1 != m:
        raise GraphError(f"header declares {m} edges, found {len(lines) - 1}")
    edges = []
    for i, ln in enumerate(lines[1:], start=2):
        tok = ln.split()
        if len(tok) != 2:
            raise GraphError(f"line {i}: expected 'u v'")
        u, v = _ints(tok, "edge", i)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {i}: edge ({u},{v}) has an endpoint outside [0, {n})")
        edges.append((u, v))
    return Graph(n, edges)


def write_edge_list(g, path):
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(format_edge_list(g))


def read_edge_list(path):
    with open(path, encoding="ascii") as f:
        return parse_edge_list(f.read())


def format_partition(p):
    def join(ids):
        return "".join(f" {v}" for v in ids.tolist())

    lines = ["controls:" + join(p.controls)]
    lines.extend(f"block {k}:" + join(b) for k, b in enumerate(p.blocks))
    return "\n".join(lines) + "\n"


def parse_partition(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("controls:"):
        raise PartitionError("line 1: expected 'controls: ...'")
    try:
        controls = [int(t) for t in lines[0][len("controls:"):].split()]
    except ValueError:
        raise PartitionError("line 1: non-integer vertex id") from None
    if any(abs(v) > MAX_VERTICES for v in controls):
        raise PartitionError("line 1: vertex id out of range")
    blocks = []
    for i, ln in enumerate(lines[1:], start=2):
        head, sep, rest = ln.partition(":")
        tok = head.split()
        if not sep or len(tok) != 2 or tok[0] != "block" or tok[1] != str(len(blocks)):
            raise PartitionError(f"line {i}: expected 'block {len(blocks)}: ...'")
        try:
            blocks.append([int(t) for t in rest.split()])
        except ValueError:
            raise PartitionError(f"line {i}: non-integer vertex id") from None
        if any(abs(v) > MAX_VERTICES for v in blocks[-1]):
            raise PartitionError(f"line {i}: vertex id out of range")
    return Partition(blocks, controls)


def write_partition(p, path):
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(format_partition(p))


def read_partition(path):
    with open(path, encoding="ascii") as f:
        return parse_partition(f.read())


def format_hamiltonian(h):
    lines = [f"{h.n} {len(h.terms)}"]
    for t in h.terms:
        ops = " ".join(f"{s}:{o}" for s, o in zip(t.sites, t.ops))
        lines.append(f"{t.coeff!r} {ops}")
    return "\n".join(lines) + "\n"


def parse_hamiltonian(text, graph=None):
    """Parse the Hamiltonian format; with `graph`, two-site terms must lie on its edges."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise EcGraphError("empty Hamiltonian file")
    try:
        n, t = (int(v) for v in lines[0].split())
    except ValueError:
        raise EcGraphError("line 1: expected 'n t'") from None
    if not 0 <= n <= MAX_VERTICES or t < 0 or len(lines) - 1 != t:
        raise EcGraphError(f"line 1: bad header or term count ({len(lines) - 1} terms found)")
    if graph is not None and graph.n != n:
        raise EcGraphError(f"Hamiltonian has {n} qubits but the graph has {graph.n} vertices")
    terms = []
    for i, ln in enumerate(lines[1:], start=2):
        tok = ln.split()
        try:
            coeff = float(tok[0])
            sites, ops = zip(*((int(a), b) for a, _, b in (w.partition(":") for w in tok[1:])))
        except (ValueError, IndexError):
            raise EcGraphError(f"line {i}: expected 'coeff site:op [site:op]'") from None
        terms.append(Term(tuple(sites), "".join(ops), coeff))
    return Hamiltonian(n, terms, graph)


def write_hamiltonian(h, path):
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(format_hamiltonian(h))


def read_hamiltonian(path, graph=None):
    with open(path, encoding="ascii") as f:
        return parse_hamiltonian(f.read(), graph)


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, fractions and infinities for JSON."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return obj


def dumps_json(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_json(obj))
