"""Command-line front end: ``genalg {gen,info,verify,normalize}``.

Exit codes: 0 success or aggregate pass, 1 a suite failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import tensor_io
from .exact import GF, QQ, FieldSpec
from .ideals import BudgetExceeded as IdealBudgetExceeded
from .ideals import dim_L_d
from .stabilizers import BudgetExceeded as AutBudgetExceeded
from .suites import DEFAULT_SEED, SUITES, SuiteError, run_suite
from .tensors import random_tensor
from .torus import h_bound

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _field(args) -> FieldSpec:
    if args.field == "rational":
        if args.prime is not None:
            raise UsageError("--prime only applies with --field prime")
        return QQ
    if args.prime is None:
        raise UsageError("--field prime requires --prime")
    try:
        return GF(args.prime)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(obj: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        for k, v in obj.items():
            out.write(f"{k}\t{v if not isinstance(v, (list, dict)) else json.dumps(v)}\n")


def cmd_gen(args, out) -> int:
    f = _field(args)
    if args.space == "A" and args.n < 2:
        raise UsageError("space A needs n >= 2")
    try:
        m = random_tensor(args.space, args.n, f, args.seed, args.bound)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = tensor_io.dumps(m)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_PASS


def info_table(n: int) -> dict:
    if n < 1:
        raise UsageError("n must be at least 1")
    return {
        "n": n,
        "dim_M": n ** 3,
        "dim_C": n * n * (n + 1) // 2,
        "dim_A": (n - 1) * n * n // 2,
        "dim_L": {str(d): dim_L_d(n, d) for d in range(1, n + 1)},
        "h": h_bound(n) if n >= 2 else None,
        "trdeg_M": n ** 3 - n * n,
        "trdeg_C": (n - 1) * n * n // 2,
    }


def cmd_info(args, out) -> int:
    _emit(info_table(args.n), args.json, out)
    return EXIT_PASS


def cmd_verify(args, out) -> int:
    params = {"n": args.n, "p": args.prime, "seed": args.seed, "samples": args.samples,
              "bound": args.bound, "space": args.space}
    try:
        report = run_suite(args.suite, params, jobs=args.jobs)
    except (SuiteError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    except (IdealBudgetExceeded, AutBudgetExceeded) as exc:
        raise UsageError(f"budget exceeded: {exc}") from None
    out.write(report.to_json() if args.json else report.to_text())
    return report.exit_code


def cmd_normalize(args, out) -> int:
    from .normal_form import NormalFormError, build_slice, local_uniqueness_check, normalize
    try:
        with open(args.tensor, encoding="utf-8") as fh:
            m = tensor_io.loads(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.tensor}: {exc}") from None
    except tensor_io.TensorFormatError as exc:
        raise UsageError(str(exc)) from None
    if not m.field.is_rational:
        raise UsageError("normalize works over the rationals only")
    if m.n < 2:
        raise UsageError("normalize needs n >= 2")
    from .tensors import TensorSpace
    if not TensorSpace(args.space, m.n, m.field).contains(m):
        raise UsageError(f"tensor does not lie in space {args.space}")
    slc = build_slice(m.n, args.space)
    try:
        res = normalize(m, slc, max_iter=args.max_iter)
    except NormalFormError as exc:
        out.write(json.dumps({"status": "fail", "error": str(exc)}) + "\n" if args.json
                  else f"status\tfail\nerror\t{exc}\n")
        return EXIT_FAIL
    obj = {
        "status": "pass",
        "iterations": res.iterations,
        "residual": float(f"{res.residual:.3e}"),
        "g": [[float(f"{x:.12g}") for x in row] for row in res.g],
        "slice_coordinates": [float(f"{x:.12g}") for x in
                              _slice_coords(slc, res.z)],
        "locally_unique": local_uniqueness_check(slc, res.z),
    }
    _emit(obj, args.json, out)
    return EXIT_PASS


def _slice_coords(slc, z):
    from .normal_form import coords_float
    v = coords_float(slc.space, z)
    return (v - slc.base_coords)[slc.complement]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genalg", description="Exact verification toolkit for "
                                 "generic n-dimensional algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, n_required=False, with_n=True):
        if with_n:
            p.add_argument("--n", type=int, required=n_required)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="json", action="store_true", default=False)
        g.add_argument("--text", dest="json", action="store_false")

    g = sub.add_parser("gen", help="write a seeded random tensor file")
    common(g, n_required=True)
    g.add_argument("--space", choices=("M", "C", "A", "C0"), default="M")
    g.add_argument("--field", choices=("rational", "prime"), default="rational")
    g.add_argument("--prime", type=int)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--bound", type=int, default=9)
    g.add_argument("--output", "-o")

    i = sub.add_parser("info", help="dimension table for a given n")
    common(i, n_required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    common(v)
    v.add_argument("--space", choices=("M", "C"))
    v.add_argument("--prime", type=int)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--samples", type=int)
    v.add_argument("--bound", type=int)
    v.add_argument("--jobs", type=int, default=1)

    nz = sub.add_parser("normalize", help="move a tensor onto the local slice through c")
    nz.add_argument("tensor", help="tensor file (JSON)")
    common(nz, with_n=False)
    nz.add_argument("--space", choices=("M", "C"), default="M")
    nz.add_argument("--max-iter", type=int, default=50)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    handlers = {"gen": cmd_gen, "info": cmd_info, "verify": cmd_verify, "normalize": cmd_normalize}
    try:
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        return handlers[args.command](args, out)
    except UsageError as exc:
        print(f"genalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
