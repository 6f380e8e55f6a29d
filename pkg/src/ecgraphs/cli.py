"""Command-line interface.

Subcommands: ``generate``, ``partition``, ``metrics``, ``scan``,
``schedule`` and ``groundstate``. Family and strategy parameters are given
as ``key=value`` words; everything else is a flag. Every output carries the
tool version and the fully resolved configuration, and contains no
timestamps, so identical commands produce identical bytes.

Exit status: 0 on success, 1 on invalid input, 2 on internal errors.
"""

import argparse
import math
import sys

from . import __version__
from .controllability import CostModel, classify, family_scan, partition_metrics
from .exceptions import EcGraphError, ParameterError
from .families import FamilySpec
from .graph import validate_partition
from .groundstate import (DENSE_CAP, ITERATIVE_CAP, approx_ground_energy,
                          exact_ground_energy)
from .hamiltonian import MODELS, build_hamiltonian
from .io import (dumps_json, format_edge_list, format_partition, read_edge_list,
                 read_hamiltonian, read_partition, write_hamiltonian, write_json)
from .partitioner import PartitionStrategy

__all__ = ["main", "run"]

FAMILY_KEYS = {"d": int, "N": int, "L": int, "k": int, "level": int, "side": int, "n": int,
               "p": float, "mean_degree": float, "alpha": float, "kmin": int, "beta": float}
STRATEGY_KEYS = {"max_block": int, "delta": float, "f": float}
COST_KEYS = {"x": float, "eps": float, "eps_gate": float}
MODEL_KEYS = {"J": float, "h": float, "low": float, "high": float}


class UsageError(EcGraphError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_pairs(words, allowed):
    out = {}
    for w in words:
        key, sep, val = w.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {w!r}")
        if key not in allowed:
            raise UsageError(f"unknown key {key!r}; allowed: {', '.join(sorted(allowed))}")
        if key in out:
            raise UsageError(f"key {key!r} given twice")
        conv = allowed[key]
        try:
            if conv is list:
                out[key] = [int(s) for s in val.split(",") if s]
            elif conv is str:
                out[key] = val
            else:
                out[key] = conv(val)
        except ValueError:
            raise UsageError(f"bad value for {key}: {val!r}") from None
        if isinstance(out[key], float) and not math.isfinite(out[key]):
            raise UsageError(f"{key} must be finite")
    return out


def _cost_model(args, kv):
    x = kv.pop("x", args.x)
    eps = kv.pop("eps_gate", kv.pop("eps", args.eps_gate))
    return CostModel(x=1.0 if x is None else x, eps_gate=0.1 if eps is None else eps)


def _meta(command, config, seed):
    return {"tool": "ecgraphs", "version": __version__, "command": command,
            "config": config, "seed": seed}


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _require_output(args):
    if not args.output:
        raise UsageError(f"{args.command} needs -o/--output")


def cmd_generate(args):
    _require_output(args)
    kv = _parse_pairs(args.params, FAMILY_KEYS)
    spec = FamilySpec(kind=args.kind, seed=args.seed, **kv)
    g, part = spec.generate()
    config = {"family": spec.to_dict()}
    _emit(format_edge_list(g), args.output)
    if args.partition_out:
        if part is None:
            raise ParameterError(f"family {args.kind!r} has no canonical partition")
        _emit(format_partition(part), args.partition_out)
        config["partition_out"] = args.partition_out
        write_json({"meta": _meta("generate", config, args.seed),
                    "strategy": {"kind": "canonical"}}, args.partition_out + ".meta.json")
    write_json({"meta": _meta("generate", config, args.seed), "n": g.n, "m": g.num_edges},
               args.output + ".meta.json")


def cmd_partition(args):
    _require_output(args)
    g = read_edge_list(args.graph)
    kv = _parse_pairs(args.params, STRATEGY_KEYS)
    if args.strategy == "canonical":
        raise UsageError("canonical partitions come from `generate --partition-out`")
    strategy = PartitionStrategy(kind=args.strategy, seed=args.seed, **kv)
    p = strategy.apply(g)
    _emit(format_partition(p), args.output)
    config = {"graph": args.graph, "strategy": strategy.to_dict()}
    write_json({"meta": _meta("partition", config, args.seed), "n_blocks": p.n_blocks,
                "controls": p.num_controls, "max_block": p.max_block},
               args.output + ".meta.json")


def _load_pair(args):
    g = read_edge_list(args.graph)
    p = read_partition(args.partition)
    validate_partition(g, p).raise_if_invalid()
    return g, p


def cmd_metrics(args):
    kv = _parse_pairs(args.params, COST_KEYS)
    model = _cost_model(args, kv)
    g, p = _load_pair(args)
    report = partition_metrics(g, p, model)
    config = {"graph": args.graph, "partition": args.partition,
              "model": {"x": model.x, "eps_gate": model.eps_gate}}
    _emit(dumps_json({"meta": _meta("metrics", config, args.seed),
                      "metrics": report.to_dict()}), args.output)


def cmd_scan(args):
    allowed = dict(FAMILY_KEYS, **STRATEGY_KEYS, **COST_KEYS, sizes=list, strategy=str,
                   poly_cap=float)
    kv = _parse_pairs(args.params, allowed)
    if "sizes" not in kv:
        raise UsageError("scan needs sizes=a,b,c")
    sizes = kv.pop("sizes")
    poly_cap = kv.pop("poly_cap", 3.0)
    model = _cost_model(args, kv)
    skind = kv.pop("strategy", "canonical")
    strategy = PartitionStrategy(kind=skind, seed=args.seed,
                                 **{k: kv.pop(k) for k in list(kv) if k in STRATEGY_KEYS})
    spec = FamilySpec(kind=args.kind, seed=args.seed, **kv)
    scan = family_scan(spec, strategy, sizes, model, workers=args.threads)
    config = {"family": spec.to_dict(), "strategy": strategy.to_dict(), "sizes": sizes,
              "model": {"x": model.x, "eps_gate": model.eps_gate}, "poly_cap": poly_cap}
    meta = _meta("scan", config, args.seed)
    if args.output:
        # the table is written even when the scan turns out not to be classifiable
        _emit(scan.to_csv(), args.output + ".csv")
        write_json({"meta": meta, "scan": scan.to_dict()}, args.output + ".json")
    verdict = classify(scan, poly_cap)
    vtext = dumps_json({"meta": meta, "verdict": verdict.to_dict()})
    if args.output:
        _emit(vtext, args.output + ".verdict.json")
    sys.stdout.write(vtext)


def cmd_schedule(args):
    from .schedule import build_schedule

    kv = _parse_pairs(args.params, COST_KEYS)
    model = _cost_model(args, kv)
    g, p = _load_pair(args)
    sched = build_schedule(g, p, model, args.src, args.dst)
    config = {"graph": args.graph, "partition": args.partition, "src": args.src,
              "dst": args.dst, "model": {"x": model.x, "eps_gate": model.eps_gate}}
    text = dumps_json({"meta": _meta("schedule", config, args.seed),
                       "schedule": sched.to_dict()})
    if args.output:
        _emit(text, args.output)
        print(sched.summary())
    else:
        sys.stdout.write(text)


def cmd_groundstate(args):
    kv = _parse_pairs(args.params, MODEL_KEYS)
    g, p = _load_pair(args)
    config = {"graph": args.graph, "partition": args.partition, "method": args.method,
              "oracle": args.oracle}
    if args.hamiltonian:
        if kv or args.model:
            raise UsageError("--hamiltonian excludes --model and model parameters")
        h = read_hamiltonian(args.hamiltonian, g)
        config["hamiltonian"] = args.hamiltonian
    else:
        if not args.model:
            raise UsageError("groundstate needs --model or --hamiltonian")
        h = build_hamiltonian(g, args.model, seed=args.seed, **kv)
        config["model"] = dict(name=args.model, **kv)
    if args.save_hamiltonian:
        write_hamiltonian(h, args.save_hamiltonian)
    report = approx_ground_energy(h, p, method=args.method, workers=args.threads)
    out = {"meta": _meta("groundstate", config, args.seed)}
    if args.oracle:
        cap = DENSE_CAP if args.method == "dense" else ITERATIVE_CAP
        if h.n <= cap:
            report.e_exact = exact_ground_energy(h, args.method)
            report.gap = abs(report.e_exact - report.e_approx)
        else:
            out["oracle_skipped"] = f"{h.n} qubits exceed the {args.method} cap of {cap}"
    out["energy"] = report.to_dict()
    _emit(dumps_json(out), args.output)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--x", type=float, default=None, help="cost exponent (default 1.0)")
    common.add_argument("--eps-gate", type=float, default=None,
                        help="gate accuracy (default 0.1)")
    common.add_argument("-o", "--output", default=None)

    parser = _Parser(prog="ecgraphs", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"ecgraphs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("generate", parents=[common], help="build a family member")
    s.add_argument("kind")
    s.add_argument("params", nargs="*")
    s.add_argument("--partition-out", default=None)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("partition", parents=[common], help="partition a graph file")
    s.add_argument("graph")
    s.add_argument("strategy")
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_partition)

    s = sub.add_parser("metrics", parents=[common], help="controllability metrics")
    s.add_argument("graph")
    s.add_argument("partition")
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("scan", parents=[common], help="scan a family and classify it")
    s.add_argument("kind")
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("schedule", parents=[common], help="transfer schedule between blocks")
    s.add_argument("graph")
    s.add_argument("partition")
    s.add_argument("params", nargs="*")
    s.add_argument("--src", type=int, required=True)
    s.add_argument("--dst", type=int, required=True)
    s.set_defaults(func=cmd_schedule)

    s = sub.add_parser("groundstate", parents=[common], help="decoupled ground energy")
    s.add_argument("graph")
    s.add_argument("partition")
    s.add_argument("params", nargs="*")
    s.add_argument("--model", choices=MODELS, default=None)
    s.add_argument("--hamiltonian", default=None, help="Hamiltonian text file")
    s.add_argument("--save-hamiltonian", default=None)
    s.add_argument("--method", choices=("auto", "dense", "iterative"), default="auto")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(func=cmd_groundstate)
    return parser


def run(argv=None):
    """Execute one command and return its exit status."""
    try:
        parser = build_parser()
        args, extra = parser.parse_known_args(argv)
        # key=value words may follow options; anything else is a usage error
        stray = [w for w in extra if w.startswith("-") or "=" not in w]
        if stray or (extra and not hasattr(args, "params")):
            raise UsageError(f"unrecognized arguments: {' '.join(stray or extra)}")
        args.params = list(getattr(args, "params", [])) + extra
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        if not 0 <= args.seed < 2 ** 64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        args.func(args)
    except (EcGraphError, OSError, UnicodeDecodeError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        msg = " ".join(str(exc).split())
        print(f"internal error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
