"""Command-line interface.

Exit status: 0 for success or an affirmative verdict, 1 for a negative
mathematical verdict, 2 for usage, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import files
from .cone import cone_membership
from .core import InputError, SkewLoopError, ToleranceConfig, orthonormal_complement_pair
from .synthesis import HelixSpec, NotFoundError, NotRealizableError, find_lattice_class, helix_arc, helix_loop_for_class, realize_skew_loop
from .tantrix import compute_tantrix, is_skew


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_gen_helix(args) -> int:
    if args.raw:
        u1, u2 = orthonormal_complement_pair(args.g)
        arc = helix_arc(HelixSpec(args.g, u1, u2, args.r, args.samples))
    else:
        arc = helix_loop_for_class(args.g, args.r, args.samples)
    files.write_curve(args.out, arc)
    _emit({"displacement": arc.displacement.tolist(), "samples": len(arc)})
    return 0


def cmd_verify_skew(args) -> int:
    tol = ToleranceConfig(eps_emb=args.tol_emb)
    verdict = is_skew(files.read_loop(args.curve), tol)
    _emit(verdict.to_dict())
    return 0 if verdict.is_skew else 1


def cmd_tantrix(args) -> int:
    files.write_curve(args.out, compute_tantrix(files.read_loop(args.curve)))
    return 0


def cmd_cone_test(args) -> int:
    tx = files.read_tantrix(args.tantrix)
    cert = cone_membership(args.g, tx.dirs)
    _emit(cert.to_dict())
    return 0 if cert.is_interior else 1


def cmd_realize(args) -> int:
    tx = files.read_tantrix(args.tantrix)
    lattice = files.read_lattice(args.lattice)
    try:
        result = realize_skew_loop(tx, args.g, lattice)
    except NotRealizableError as exc:
        out = {"realizable": False, "condition": exc.condition, "reason": str(exc)}
        if exc.witness is not None:
            out["witness"] = [float(w) for w in exc.witness]
        if exc.certificate is not None:
            out["certificate"] = exc.certificate.to_dict()
        _emit(out)
        return 1
    files.write_curve(args.out, result.arc)
    _emit(
        {
            "realizable": True,
            "certificate": result.certificate.to_dict(),
            "verdict": result.verdict.to_dict(),
            "displacement": result.arc.displacement.tolist(),
        }
    )
    return 0 if result.verdict.is_skew else 1


def cmd_find_class(args) -> int:
    tx = files.read_tantrix(args.tantrix)
    lattice = files.read_lattice(args.lattice)
    try:
        classes = find_lattice_class(tx, lattice, args.radius)
    except NotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    for cls in classes:
        print(cls)
    return 0


def cmd_plot_data(args) -> int:
    data = files.read_curve(args.curve)
    n = data["samples"].shape[1]
    with open(args.out, "w") as fh:
        fh.write(",".join(["t"] + [f"x{k + 1}" for k in range(n)]) + "\n")
        for t, row in zip(data["params"], data["samples"]):
            fh.write(",".join(files.format_number(v) for v in (t, *row)) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewloops", description="Skew loops in flat quotients of R^n.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-helix", help="write a helical skew loop")
    p.add_argument("--g", type=_vector, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--raw", action="store_true", help="use t*g (displacement 2*pi*g) instead of t*g/(2*pi)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_helix)

    p = sub.add_parser("verify-skew", help="decide skewness of a curve file")
    p.add_argument("--curve", required=True)
    p.add_argument("--tol-emb", type=float, default=ToleranceConfig().eps_emb)
    p.set_defaults(func=cmd_verify_skew)

    p = sub.add_parser("tantrix", help="write the tantrix of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tantrix)

    p = sub.add_parser("cone-test", help="classify g against the cone over a tantrix")
    p.add_argument("--tantrix", required=True)
    p.add_argument("--g", type=_vector, required=True)
    p.set_defaults(func=cmd_cone_test)

    p = sub.add_parser("realize", help="build a g-homotopic skew loop with the given tantrix")
    p.add_argument("--tantrix", required=True)
    p.add_argument("--g", type=_vector, required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("find-class", help="list lattice classes realizable by a tantrix")
    p.add_argument("--tantrix", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_find_class)

    p = sub.add_parser("plot-data", help="dump a curve as CSV rows t,x1,...,xn")
    p.add_argument("--curve", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SkewLoopError, InputError, ValueError, OSError) as exc:
        print(f"skewloops {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
