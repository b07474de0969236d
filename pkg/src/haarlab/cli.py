"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 parameter error.  Every run with an --out target also writes
<out>.manifest.json echoing the resolved configuration (the manifest is
the only place a timestamp appears, so payload outputs are repeatable
byte for byte).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io as hio
from .atomic import atb_upper_bound
from .measure import MeasureError, generate
from .norms import (
    NormError,
    bmo_martingale,
    bmo_oscillation,
    h1_norm,
    lambda_norm,
    lp_norm,
    weak_l1,
)
from .shift import ShiftError, apply_shift
from .studies import blowup_study, rows_to_csv, theorem_suite, THEOREM_NAMES
from .tree import TreeError
from .verify import run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_PARAM = 3


class CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _write_manifest(out: str | None, config: dict) -> None:
    if out is None:
        return
    manifest = {
        k: v
        for k, v in config.items()
        if isinstance(v, (str, int, float, bool, list, type(None)))
    }
    manifest["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _emit(payload: str, out: str | None, config: dict) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        Path(out).write_text(payload)
        _write_manifest(out, config)


def _family_from_args(kind: str, args) -> dict:
    fam: dict = {"kind": kind}
    if kind == "geometric_unbalanced" and args.q is not None:
        fam["q"] = args.q
    if kind == "spine" and args.M is not None:
        fam["M"] = args.M
    if kind == "random_doubling":
        if args.p_min is not None:
            fam["p_min"] = args.p_min
        if args.p_max is not None:
            fam["p_max"] = args.p_max
    return fam


def _parse_depths(spec: str) -> list[int]:
    try:
        if ":" in spec:
            a, b = spec.split(":")
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(spec)]
    except ValueError:
        raise CliError(EXIT_PARAM, f"bad depth range {spec!r}; expected 'a:b'")


def cmd_measure(args) -> int:
    if args.action == "gen":
        try:
            fam = _family_from_args(args.kind, args)
            mu = generate(depth=args.depth, seed=args.seed, **fam)
        except (MeasureError, TypeError) as exc:
            raise CliError(EXIT_INPUT, f"invalid measure spec: {exc}")
        rep = mu.balanced_constant()
        if args.out:
            hio.save_measure(mu, args.out)
            _write_manifest(args.out, vars(args) | {"command": "measure gen"})
        print(f"balanced_constant {rep.balanced_constant!r}")
        print(f"bal_form_constant {rep.bal_form_constant!r}")
        print(f"doubling_ratio {mu.doubling_ratio()!r}")
        return EXIT_OK
    # inspect
    mu = _load_measure(args.file)
    rep = mu.balanced_constant()
    root_b = float(np.sqrt(rep.balanced_constant))
    sandwich_ok = root_b <= rep.bal_form_constant <= 4 * root_b
    print(f"depth {mu.depth}")
    print(f"total_mass {mu.total_mass!r}")
    print(f"balanced_constant {rep.balanced_constant!r}")
    print(f"bal_form_constant {rep.bal_form_constant!r}")
    print(f"doubling_ratio {mu.doubling_ratio()!r}")
    print(f"sandwich {'ok' if sandwich_ok else 'VIOLATED'}")
    return EXIT_OK


def _load_measure(path):
    try:
        return hio.load_measure(path)
    except hio.FormatError as exc:
        raise CliError(EXIT_INPUT, str(exc))


def _load_function(path, mu):
    try:
        f = hio.load_function(path)
    except hio.FormatError as exc:
        raise CliError(EXIT_INPUT, str(exc))
    if f.depth != mu.depth:
        raise CliError(
            EXIT_INPUT, f"function depth {f.depth} != measure depth {mu.depth}"
        )
    return f


def cmd_norm(args) -> int:
    mu = _load_measure(args.measure)
    f = _load_function(args.function, mu)
    params: dict = {}
    witness = None
    try:
        if args.norm == "lp":
            params = {"p": args.p}
            value = lp_norm(f, mu, args.p)
        elif args.norm == "weak-l1":
            value = weak_l1(f, mu)
        elif args.norm == "bmo":
            value = bmo_martingale(f, mu)
        elif args.norm == "bmo-osc":
            value = bmo_oscillation(f, mu)
        elif args.norm == "lambda":
            params = {"q": args.q, "alpha": args.alpha}
            res = lambda_norm(f, mu, args.q, args.alpha)
            value, witness = res.value, res.witness_node
        elif args.norm == "h1":
            value = h1_norm(f, mu)
        elif args.norm == "atb-upper":
            value = atb_upper_bound(f, mu)
        else:
            raise CliError(EXIT_PARAM, f"unknown norm {args.norm!r}")
    except (NormError, TypeError) as exc:
        raise CliError(EXIT_PARAM, f"invalid norm parameters: {exc}")
    report = hio.norm_report(args.norm, params, value, witness)
    _emit(json.dumps(report) + "\n", args.out, vars(args) | {"command": "norm"})
    return EXIT_OK


def cmd_apply(args) -> int:
    mu = _load_measure(args.measure)
    f = _load_function(args.function, mu)
    try:
        T = hio.load_shift(args.shift, mu.depth)
    except hio.FormatError as exc:
        raise CliError(EXIT_INPUT, str(exc))
    try:
        g = apply_shift(T, f, mu)
    except (ShiftError, TreeError) as exc:
        raise CliError(EXIT_INPUT, f"cannot apply shift: {exc}")
    hio.save_function(g, args.out)
    _write_manifest(args.out, vars(args) | {"command": "apply"})
    return EXIT_OK


def cmd_study(args) -> int:
    depths = _parse_depths(args.depths)
    kinds = args.family or ["lebesgue"]
    families = [_family_from_args(k, args) for k in kinds]
    try:
        if args.kind == "blowup":
            rows = blowup_study(families[0], args.alpha, depths, seed=args.seed)
        else:
            rows = theorem_suite(
                args.name,
                families,
                depths,
                seed=args.seed,
                alpha=args.alpha,
                n_random=args.trials,
            )
    except (MeasureError, ValueError) as exc:
        raise CliError(EXIT_PARAM, f"invalid study config: {exc}")
    config = {k: v for k, v in vars(args).items() if not callable(v)}
    _emit(rows_to_csv(rows), args.out, config | {"command": f"study {args.kind}"})
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verification(depth=args.depth, trials=args.trials, seed=args.seed)
    failures = [r for r in results if not r.passed]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    if args.out:
        payload = json.dumps(
            [
                {"name": r.name, "passed": bool(r.passed), "detail": r.detail}
                for r in results
            ],
            indent=2,
        )
        Path(args.out).write_text(payload + "\n")
        _write_manifest(args.out, vars(args) | {"command": "verify"})
    if failures:
        print(json.dumps({"failed": [r.name for r in failures]}))
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarlab",
        description="Haar shifts, martingale norms, and balance diagnostics "
        "on finite dyadic trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_measure = sub.add_parser("measure", help="generate or inspect measures")
    msub = p_measure.add_subparsers(dest="action", required=True)
    p_gen = msub.add_parser("gen")
    p_gen.add_argument("--kind", required=True)
    p_gen.add_argument("--depth", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--q", type=float, default=None)
    p_gen.add_argument("--M", type=float, default=None)
    p_gen.add_argument("--p-min", dest="p_min", type=float, default=None)
    p_gen.add_argument("--p-max", dest="p_max", type=float, default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(handler=cmd_measure)
    p_ins = msub.add_parser("inspect")
    p_ins.add_argument("file")
    p_ins.set_defaults(handler=cmd_measure)

    p_norm = sub.add_parser("norm", help="evaluate a norm of a function file")
    p_norm.add_argument("--function", required=True)
    p_norm.add_argument("--measure", required=True)
    p_norm.add_argument(
        "--norm",
        required=True,
        choices=["lp", "weak-l1", "bmo", "bmo-osc", "lambda", "h1", "atb-upper"],
    )
    p_norm.add_argument("--p", type=float, default=2.0)
    p_norm.add_argument("--q", type=float, default=2.0)
    p_norm.add_argument("--alpha", type=float, default=0.0)
    p_norm.add_argument("--out", default=None)
    p_norm.set_defaults(handler=cmd_norm)

    p_apply = sub.add_parser("apply", help="apply a shift file to a function file")
    p_apply.add_argument("--shift", required=True)
    p_apply.add_argument("--function", required=True)
    p_apply.add_argument("--measure", required=True)
    p_apply.add_argument("--out", required=True)
    p_apply.set_defaults(handler=cmd_apply)

    p_study = sub.add_parser("study", help="run a study, emit CSV")
    ssub = p_study.add_subparsers(dest="kind", required=True)
    for kind in ("blowup", "theorem"):
        p = ssub.add_parser(kind)
        p.add_argument("--family", action="append", default=None)
        p.add_argument("--depths", required=True, help="range a:b")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--q", type=float, default=None)
        p.add_argument("--M", type=float, default=None)
        p.add_argument("--p-min", dest="p_min", type=float, default=None)
        p.add_argument("--p-max", dest="p_max", type=float, default=None)
        p.add_argument("--trials", type=int, default=12)
        p.add_argument("--out", default=None)
        if kind == "theorem":
            p.add_argument("--name", required=True, choices=list(THEOREM_NAMES))
        p.set_defaults(handler=cmd_study)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--depth", type=int, default=8)
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=7)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
