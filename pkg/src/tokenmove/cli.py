"""Command-line front end.

Exit codes: 0 yes/valid, 1 no/invalid, 2 unknown or refused, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import io
from .directed import solve_udtm
from .errors import CapExceeded, InputError, TokenMoveError, UnsupportedVariant
from .graph import validate_sequence
from .grid import GridSpec, gen_grid
from .oracle import DEFAULT_CAP, shortest_transforming_sequence
from .preprocess import (
    contract, is_contracted, prune_obstacles_with_map, subdivide, to_max_degree_three,
)
from .reductions import (
    forward_sequence_directed, forward_sequence_undirected, reduce_msi_directed,
    reduce_msi_undirected, reduce_rbds,
)
from .report import report_json, run_report
from .unlabelled import solve_by_k, solve_uutm

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _resolve_method(inst, method: str) -> str:
    if method != "auto":
        return method
    if inst.variant == "UUTM":
        return "ell"
    if inst.variant == "UDTM":
        return "forest"
    print(f"warning: no fixed-parameter solver for {inst.variant}; using the oracle",
          file=sys.stderr)
    return "oracle"


def _solve(inst, args, method: str):
    """(decision, sequence) from the named method."""
    if method == "ell":
        sol = solve_uutm(inst, threads=args.threads)
        return sol.decision, sol.sequence
    if method == "forest":
        sol = solve_udtm(inst, engine=args.engine, delta=args.delta,
                         exact_threshold=args.exact_threshold, seed=args.seed)
        return sol.decision, sol.sequence
    if method == "k":
        sol = solve_by_k(inst)
        return sol.decision, sol.sequence
    res = shortest_transforming_sequence(inst, cap=args.cap, max_length=inst.budget)
    return res.reachable, res.witness


def cmd_solve(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    decision, seq = _solve(inst, args, _resolve_method(inst, args.method))
    if decision:
        print(f"YES {len(seq)}")
        if args.emit_sequence:
            _write(args.emit_sequence, io.serialize_sequence(seq))
        return EXIT_YES
    print("NO")
    return EXIT_NO


def cmd_oracle(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    res = shortest_transforming_sequence(inst, cap=args.cap)
    if not res.reachable:
        print("UNREACHABLE")
        return EXIT_NO
    print(f"REACHABLE {res.shortest_length}")
    if args.emit_sequence:
        _write(args.emit_sequence, io.serialize_sequence(res.witness))
    return EXIT_YES


def cmd_verify(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    seq = io.parse_sequence(_read(args.sequence))
    verdict = validate_sequence(inst, seq, lenient=args.lenient)
    print(verdict)
    return EXIT_YES if verdict.reaches_target else EXIT_NO


def cmd_kernelize(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    kernel, cmap = contract(inst)
    _write(args.output, io.serialize_instance(kernel))
    if args.map:
        _write(args.map, io.contraction_map_text(cmap))
    return EXIT_YES


def cmd_prune(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    if inst.variant == "UDTM" and not is_contracted(inst):
        raise UnsupportedVariant("prune needs a contracted instance; run kernelize first")
    pruned, kept = prune_obstacles_with_map(inst)
    _write(args.output, io.serialize_instance(pruned))
    if args.map:
        _write(args.map, io.serialize_map(kept))
    return EXIT_YES


def cmd_transform(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    if args.kind == "degree3":
        out, central = to_max_degree_three(inst)
        map_text = "".join(f"keep {c} {v}\n" for v, c in enumerate(central))
    else:
        if args.times is None:
            raise InputError("transform subdivide needs --times")
        out = subdivide(inst, args.times)
        map_text = "".join(f"keep {v} {v}\n" for v in range(inst.graph.vertex_count))
    _write(args.output, io.serialize_instance(out))
    if args.map:
        _write(args.map, map_text)
    return EXIT_YES


def cmd_reduce(args) -> int:
    seq = None
    if args.kind == "rbds":
        if not args.variant:
            raise InputError("reduce rbds needs --variant")
        inst = reduce_rbds(io.parse_rbds(_read(args.input)), args.variant)
    else:
        msi = io.parse_msi(_read(args.input))
        if args.kind == "msi-dir":
            inst = reduce_msi_directed(msi)
            if args.planted:
                seq = forward_sequence_directed(msi, args.planted)
        else:
            inst, params = reduce_msi_undirected(msi, cap=args.cap)
            print(f"K={params.K} L={params.L} Q={params.Q} Q*={params.Q_star} "
                  f"ell={params.ell} vertices={params.vertex_count}", file=sys.stderr)
            if args.planted:
                seq = forward_sequence_undirected(msi, args.planted, cap=args.cap)
    _write(args.output, io.serialize_instance(inst))
    if seq is not None and args.emit_sequence:
        _write(args.emit_sequence, io.serialize_sequence(seq))
    return EXIT_YES


def cmd_gen(args) -> int:
    shape = args.shape
    if shape not in ("centered", "full"):
        try:
            shape = tuple(int(x) for x in shape.split(","))
        except ValueError:
            raise InputError("--shape is centered, full, or a comma-separated vertex list") from None
    spec = GridSpec(args.rows, args.cols, args.fill, args.seed, shape, args.budget, args.variant)
    _write(args.output, io.serialize_instance(gen_grid(spec)))
    return EXIT_YES


def cmd_report(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    start = time.perf_counter()
    reason = None
    method = _resolve_method(inst, args.method)
    try:
        decision, seq = _solve(inst, args, method)
    except CapExceeded as exc:
        decision, seq, reason = None, None, f"cap: {exc}"
    elapsed = 0.0 if args.no_time else time.perf_counter() - start
    record = run_report(inst, method, decision, seq if decision else None, elapsed, reason)
    print(report_json(record))
    if decision is None:
        return EXIT_UNKNOWN
    return EXIT_YES if decision else EXIT_NO


def _solver_flags(p):
    p.add_argument("--method", choices=["auto", "ell", "forest", "k", "oracle"], default="auto")
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--exact-threshold", type=int, default=15)
    p.add_argument("--engine", choices=["gadget", "direct"], default="gadget")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tokenmove", description="Token moving solvers and generators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="decide an instance within its budget")
    p.add_argument("instance")
    _solver_flags(p)
    p.add_argument("--emit-sequence", metavar="FILE")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact shortest sequence by exhaustive search")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--emit-sequence", metavar="FILE")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="replay a sequence file against an instance")
    p.add_argument("instance")
    p.add_argument("sequence")
    p.add_argument("--lenient", action="store_true", help="re-derive paths instead of checking them")
    p.set_defaults(func=cmd_verify)

    for name, func, text in (
        ("kernelize", cmd_kernelize, "contract onto S and T"),
        ("prune", cmd_prune, "delete obstacles no short sequence can use"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("instance")
        p.add_argument("-o", "--output")
        p.add_argument("--map", metavar="FILE")
        p.set_defaults(func=func)

    p = sub.add_parser("transform", help="degree-three or subdivision transform")
    p.add_argument("kind", choices=["degree3", "subdivide"])
    p.add_argument("instance")
    p.add_argument("--times", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--map", metavar="FILE")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reduce", help="generate instances from hard problems")
    p.add_argument("kind", choices=["rbds", "msi-dir", "msi-undir"])
    p.add_argument("input")
    p.add_argument("--variant", choices=["UUTM", "UDTM", "LUTM", "LDTM"])
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--planted", type=int, nargs="+", metavar="V")
    p.add_argument("--emit-sequence", metavar="FILE")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="instance generators")
    p.add_argument("kind", choices=["grid"])
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--fill", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shape", default="centered")
    p.add_argument("--budget", type=int)
    p.add_argument("--variant", choices=["UUTM", "LUTM"], default="UUTM")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("report", help="solve and print a JSON run record")
    p.add_argument("instance")
    _solver_flags(p)
    p.add_argument("--no-time", action="store_true", help="report wall_time as 0 for reproducible output")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"UNKNOWN: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except UnsupportedVariant as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TokenMoveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
