"""Control-cost metrics and finite-size classification of graph families.

Synthesizing an arbitrary unitary on ``m`` qubits to accuracy ``eps_gate``
is costed at ``2**(2*m*x) / eps_gate`` elementary operations. For a
partition with ``L_max`` spins in its largest block and block-graph
diameter ``D`` the control complexity is ``D * 2**(2*x*L_max) / eps_gate``.

A family is classified as efficiently controllable over a finite scan when
its control fraction falls monotonically to less than half its first value
and the log-log slope of complexity against ``n`` stays below a polynomial
cap.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
import csv
import io
import math

import numpy as np

from .exceptions import CostOverflowError, EcGraphError, ParameterError
from .graph import block_graph, diameter, validate_partition

__all__ = [
    "CostModel",
    "MetricsReport",
    "ScanPoint",
    "ScanReport",
    "Verdict",
    "elementary_cost",
    "log2_elementary_cost",
    "partition_metrics",
    "chain_block_size",
    "lattice_block_size",
    "family_scan",
    "classify",
]


@dataclass(frozen=True)
class CostModel:
    """Exponent `x` of the synthesis cost and target gate accuracy `eps_gate`."""

    x: float = 1.0
    eps_gate: float = 0.1

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x >= 1):
            raise ParameterError(f"cost exponent x must be >= 1, got {self.x}")
        if not 0 < self.eps_gate <= 1:
            raise ParameterError(f"eps_gate must lie in (0, 1], got {self.eps_gate}")


def log2_elementary_cost(m, model):
    return 2 * m * model.x - math.log2(model.eps_gate)


def elementary_cost(m, model):
    """Operations needed for an arbitrary unitary on `m` qubits: ``2**(2mx) / eps_gate``.

    Raises
    ------
    CostOverflowError
        If the count exceeds the double range.
    """
    if m < 0:
        raise ParameterError(f"qubit count must be >= 0, got {m}")
    try:
        cost = 2.0 ** (2 * m * model.x) / model.eps_gate
    except OverflowError:
        cost = math.inf
    if math.isinf(cost):
        raise CostOverflowError(
            f"cost of {m} qubits at x={model.x} overflows (log2 = "
            f"{log2_elementary_cost(m, model):.1f})")
    return cost


@dataclass
class MetricsReport:
    n: int
    c: int
    c_over_n: Fraction
    n_blocks: int
    l_max: int
    boundary_sizes: dict
    pairwise_control_sum: int
    D: float
    complexity: float
    log2_complexity: float

    def row(self):
        return {"n": self.n, "c": self.c, "c_over_n": float(self.c_over_n),
                "N_blocks": self.n_blocks, "L_max": self.l_max, "D": self.D,
                "complexity": self.complexity}

    def to_dict(self):
        out = self.row()
        out.update(c_over_n=self.c_over_n, c_over_n_float=float(self.c_over_n),
                   log2_complexity=self.log2_complexity,
                   pairwise_control_sum=self.pairwise_control_sum,
                   boundary_sizes=[[j, k, s] for (j, k), s in sorted(self.boundary_sizes.items())])
        return out


def partition_metrics(g, p, model):
    """Control fraction, block statistics and control complexity of a partition.

    A lone block is given ``D = 1``: one synthesis on that block. When the
    block graph is disconnected, ``D`` and the complexity are ``inf``.
    """
    validate_partition(g, p).raise_if_invalid()
    bg = block_graph(g, p)
    d = diameter(bg)
    l_max = p.max_block
    if p.n_blocks == 1:
        d = 1
    if math.isinf(d):
        complexity = log2c = math.inf
    elif d == 0:
        complexity, log2c = 0.0, -math.inf
    else:
        log2c = math.log2(d) + log2_elementary_cost(l_max, model)
        complexity = d * elementary_cost(l_max, model)
        if math.isinf(complexity):
            raise CostOverflowError(f"complexity overflows (log2 = {log2c:.1f})")
    return MetricsReport(
        n=g.n, c=p.num_controls,
        c_over_n=Fraction(p.num_controls, g.n) if g.n else Fraction(0),
        n_blocks=p.n_blocks, l_max=l_max,
        boundary_sizes=bg.boundary_sizes,
        pairwise_control_sum=bg.pairwise_control_sum,
        D=d, complexity=complexity, log2_complexity=log2c)


def chain_block_size(N, x=1.0):
    """``max(2, ceil(log2(N) / (2x)))``."""
    return max(2, math.ceil(math.log2(N) / (2 * x)))


def lattice_block_size(N, d, x=1.0):
    """``max(2, ceil(((d - 1/2) / (2x) * log2(N)) ** (1/d)))``."""
    return max(2, math.ceil(((d - 0.5) / (2 * x) * math.log2(N)) ** (1 / d)))


def sierpinski_level(k):
    """Sub-gasket depth for the canonical gasket partition: about ``log3(log2 n)``."""
    n = 3 * (3 ** k + 1) // 2
    return max(1, min(k, round(math.log(math.log2(n), 3))))


def _instance(spec, strategy, size, model):
    kind = spec.kind
    if kind == "chain":
        L = chain_block_size(size, model.x) if strategy.kind == "canonical" or spec.L is None \
            else spec.L
        spec = replace(spec, N=size, L=L)
    elif kind == "lattice":
        L = lattice_block_size(size, spec.d, model.x) \
            if strategy.kind == "canonical" or spec.L is None else spec.L
        spec = replace(spec, N=size, L=L)
    elif kind == "complete-blocks":
        spec = replace(spec, N=size, L=max(2, math.ceil(math.log2(max(size, 2)))))
    elif kind == "sierpinski":
        level = spec.level
        if strategy.kind == "canonical":
            level = sierpinski_level(size)
        spec = replace(spec, k=size, level=level)
    elif kind == "percolated-lattice":
        spec = replace(spec, side=size)
    else:
        spec = replace(spec, n=size)
    g, canon = spec.generate()
    return spec, g, strategy.apply(g, canon)


@dataclass
class ScanPoint:
    size: int
    family: dict
    metrics: MetricsReport


@dataclass
class ScanReport:
    family: dict
    strategy: dict
    model: CostModel
    points: list = field(default_factory=list)

    def sizes(self):
        return [pt.size for pt in self.points]

    def to_csv(self):
        buf = io.StringIO()
        cols = ["n", "c", "c_over_n", "N_blocks", "L_max", "D", "complexity"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for pt in self.points:
            w.writerow({k: repr(v) if isinstance(v, float) else v
                        for k, v in pt.metrics.row().items()})
        return buf.getvalue()

    def to_dict(self):
        return {"family": self.family, "strategy": self.strategy,
                "model": {"x": self.model.x, "eps_gate": self.model.eps_gate},
                "points": [{"size": pt.size, "family": pt.family, **pt.metrics.to_dict()}
                           for pt in self.points]}


def family_scan(spec, strategy, sizes, model, workers=None):
    """Generate, partition and measure the family at each size.

    Parameters
    ----------
    spec : FamilySpec
    strategy : PartitionStrategy
    sizes : sequence of int
        Strictly increasing, at least three. The meaning of a size depends
        on the family (see :class:`~ecgraphs.families.FamilySpec`).
    model : CostModel
    workers : int, optional
        Thread count for computing points concurrently; output order is
        always the size order.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 3:
        raise ParameterError(f"a scan needs at least 3 sizes, got {len(sizes)}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ParameterError("scan sizes must be strictly increasing")

    def point(size):
        try:
            fam, g, p = _instance(spec, strategy, size, model)
            return ScanPoint(size, fam.to_dict(), partition_metrics(g, p, model))
        except EcGraphError as exc:
            raise type(exc)(f"scan failed at size {size}: {exc}") from exc

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            points = list(pool.map(point, sizes))
    else:
        points = [point(s) for s in sizes]
    return ScanReport(spec.to_dict(), strategy.to_dict(), model, points)


@dataclass
class Verdict:
    ec_flag: bool
    beta_hat: float
    residual: float
    intercept: float
    c_over_n: list
    fraction_halved: bool
    fraction_monotone: bool
    poly_cap: float

    def to_dict(self):
        return {"ec_flag": self.ec_flag, "beta_hat": self.beta_hat, "residual": self.residual,
                "intercept": self.intercept, "c_over_n": [float(c) for c in self.c_over_n],
                "fraction_halved": self.fraction_halved,
                "fraction_monotone": self.fraction_monotone, "poly_cap": self.poly_cap}


def classify(scan, poly_cap=3.0):
    """Finite-size verdict on efficient controllability.

    ``ec_flag`` holds when the control fraction is non-increasing across
    the scan and ends below half its first value, and the least-squares
    slope of ``log2(complexity)`` against ``log2(n)`` is at most
    `poly_cap`. The residual is the RMS deviation of that fit.
    """
    pts = scan.points
    if len(pts) < 3:
        raise ParameterError(f"need at least 3 scan points, got {len(pts)}")
    if any(not math.isfinite(pt.metrics.log2_complexity) for pt in pts):
        raise EcGraphError("cannot classify: complexity is infinite at some scan point")
    fr = [pt.metrics.c_over_n for pt in pts]
    logn = np.log2([pt.metrics.n for pt in pts])
    logc = np.array([pt.metrics.log2_complexity for pt in pts])
    slope, intercept = np.polyfit(logn, logc, 1)
    resid = float(np.sqrt(np.mean((logc - (slope * logn + intercept)) ** 2)))
    halved = fr[-1] < fr[0] / 2
    monotone = all(b <= a for a, b in zip(fr, fr[1:]))
    return Verdict(ec_flag=bool(halved and monotone and slope <= poly_cap),
                   beta_hat=float(slope), residual=resid, intercept=float(intercept),
                   c_over_n=fr, fraction_halved=halved, fraction_monotone=monotone,
                   poly_cap=poly_cap)
