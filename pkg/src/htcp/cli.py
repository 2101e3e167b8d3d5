"""Command-line entry point: ``htcp solve|classify|eigen|degree|oracle-check|gen``.

Exit codes: 0 success (solution found, property holds or inconclusive),
1 input error or guard exceeded, 2 no solution found (also argparse usage
errors), 3 proven empty, 4 property refuted, 5 oracle disagreement.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .classifiers import (
    NotApplicable,
    check_det_condition,
    check_p_pair,
    check_p_pair_via_left_inverse,
    check_r0_pair,
    check_r_pair,
    check_strong_p_pair,
)
from .generate import FAMILIES, generate
from .io import FormatError, dumps, instance_from_dict, load_json, load_vector, tensor_from_dict, write_json
from .oracle import oracle_check
from .solver import METHODS, GuardExceeded, HTCPInstance, SolverConfig, Status, solve
from .spectra import DegreeUndefined, b_eigen, degree_estimate_pair, degree_estimate_tcp, h_eigen, z_eigen

EXIT_OK, EXIT_INPUT, EXIT_NONE_FOUND, EXIT_EMPTY, EXIT_REFUTED, EXIT_DISAGREE = 0, 1, 2, 3, 4, 5

PROPERTIES = {
    "r0": check_r0_pair,
    "p": check_p_pair,
    "p-det": check_det_condition,
    "p-leftinv": check_p_pair_via_left_inverse,
    "strong-p": check_strong_p_pair,
}


def _config(args) -> SolverConfig:
    return SolverConfig(
        tol_residual=args.tol,
        rng_seed=args.seed,
        multistart_count=args.starts,
        search_radius=args.radius,
        workers=args.workers,
    )


def _envelope(command, cfg, result) -> dict:
    return {"command": command, "version": __version__, "seed": cfg.rng_seed, "config": cfg.to_dict(), "result": result}


def _emit(args, payload):
    if args.out:
        write_json(args.out, payload)
    else:
        sys.stdout.write(dumps(payload))


def _load_pair_or_tensor(path):
    """``("pair", (A, B, q))`` for instance/pair files, ``("tensor", T)`` for tensor files."""
    d = load_json(path)
    if isinstance(d, dict) and "A" in d:
        return "pair", instance_from_dict(d, require_q=False)
    return "tensor", tensor_from_dict(d)


def cmd_solve(args) -> int:
    cfg = _config(args)
    A, B, q = instance_from_dict(load_json(args.instance), require_q=True)
    report = solve(HTCPInstance(A, B, q), cfg, args.method)
    _emit(args, _envelope("solve", cfg, report.to_dict()))
    return {Status.FOUND: EXIT_OK, Status.PROVEN_EMPTY: EXIT_EMPTY}.get(report.status, EXIT_NONE_FOUND)


def cmd_classify(args) -> int:
    cfg = _config(args)
    A, B, q = instance_from_dict(load_json(args.pair), require_q=False)
    if args.q is not None:
        q = load_vector(args.q)
        if q.shape[0] != A.dim:
            raise FormatError("q dimension does not match the tensors")
    if args.property == "r":
        if q is None:
            raise FormatError("property r needs --q (or a q entry in the pair file)")
        verdict = check_r_pair(A, B, q, cfg)
    else:
        verdict = PROPERTIES[args.property](A, B, cfg)
    _emit(args, _envelope("classify", cfg, verdict.to_dict()))
    return EXIT_REFUTED if verdict.refuted else EXIT_OK


def cmd_eigen(args) -> int:
    cfg = _config(args)
    kind, data = _load_pair_or_tensor(args.file)
    if args.kind == "B":
        if kind != "pair":
            raise FormatError("B-eigenpairs need a pair file")
        res = b_eigen(data[0], data[1], cfg)
    else:
        T = data if kind == "tensor" else data[0 if args.which == "A" else 1]
        res = (h_eigen if args.kind == "H" else z_eigen)(T, cfg)
    _emit(args, _envelope("eigen", cfg, {"kind": args.kind, **res.to_dict()}))
    return EXIT_OK


def cmd_degree(args) -> int:
    cfg = _config(args)
    kind, data = _load_pair_or_tensor(args.file)
    if kind == "tensor":
        est = degree_estimate_tcp(data, cfg)
        target = "tcp"
    else:
        A, B, q = data
        est = degree_estimate_pair(A, B, cfg, q=q, method=args.method)
        target = "pair"
    _emit(args, _envelope("degree", cfg, {"target": target, **est.to_dict()}))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    cfg = _config(args)
    orders = [int(s) for s in args.orders.split(",") if s.strip()]
    summary = oracle_check(args.count, args.dims, orders, cfg)
    _emit(args, _envelope("oracle-check", cfg, summary))
    return EXIT_DISAGREE if summary["disagreements"] else EXIT_OK


def cmd_gen(args) -> int:
    files = generate(args.family, args.dims, args.order, args.count, args.seed)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for name, d in files:
        write_json(out / f"{name}.json", d)
        print(out / f"{name}.json")
    return EXIT_OK


def _common(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--starts", type=int, default=64, help="multistart count")
    p.add_argument("--radius", type=float, default=10.0, help="search radius")
    p.add_argument("--workers", type=int, default=None, help="parallelism hint (env HTCP_WORKERS)")
    p.add_argument("--out", default=None, help="output path (stdout if omitted; a directory for gen)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="htcp", description="Horizontal tensor complementarity toolkit.")
    parser.add_argument("--version", action="version", version=f"htcp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--method", choices=list(METHODS), default="all")
    _common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="test a pair property")
    p.add_argument("pair")
    p.add_argument("--property", choices=["r0", "r", *[k for k in PROPERTIES if k != "r0"]], required=True)
    p.add_argument("--q", default=None, help="vector file with q (property r)")
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eigen", help="H-, Z- or B-eigenpairs")
    p.add_argument("file", help="tensor file, or pair file")
    p.add_argument("--kind", choices=["H", "Z", "B"], default="H")
    p.add_argument("--which", choices=["A", "B"], default="A", help="tensor of a pair file used for H/Z")
    _common(p)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("degree", help="degree of a pair (pair file) or of a TCP tensor (tensor file)")
    p.add_argument("file")
    p.add_argument("--method", choices=["auto", "census"], default="auto")
    _common(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("oracle-check", help="iterative solvers vs enumeration on random instances")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--dims", type=int, default=3, help="largest n")
    p.add_argument("--orders", default="2,3,4", help="comma-separated orders")
    _common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("gen", help="write instance files")
    p.add_argument("--family", choices=list(FAMILIES), required=True)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--count", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, GuardExceeded, NotApplicable, DegreeUndefined, ValueError, OSError) as exc:
        print(f"htcp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
