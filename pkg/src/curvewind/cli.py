"""Command-line interface: ``curvewind <command> ...``.

Exit codes: 0 success, 2 malformed input, 3 non-generic curve, 4 unsupported
case, 5 internal assertion failure (including a failed fuzz suite).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import groups
from .curves import (
    dumps_curve,
    load_curve,
    perturb,
    validate_generic,
)
from .errors import CurvewindError, IdentityHolonomy, MalformedCurve, NonGeneric, UnsupportedCase
from .homotopy import build_w_k_curve, invariance_suite
from .invariants import canonical_reference, compute_invariants
from .render import render_svg

EXIT_OK, EXIT_MALFORMED, EXIT_NONGENERIC, EXIT_UNSUPPORTED, EXIT_ASSERT = 0, 2, 3, 4, 5

# (surface, holonomy, kinks) used by ``fuzz`` when no curve is given: one per case
FUZZ_DEFAULTS = (("torus", "1,0", 2), ("klein", "1,0", 1), ("klein", "2,0", 2), ("klein", "0,1", -1))


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return
    for key, value in obj.items():
        if isinstance(value, list):
            out.write(f"{key}:\n")
            for item in value:
                out.write(f"  - {json.dumps(item, sort_keys=True) if isinstance(item, dict) else item}\n")
        else:
            out.write(f"{key}: {value}\n")


def _write_text(text: str, path, out) -> None:
    if path in (None, "-"):
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path):
    try:
        return load_curve(path)
    except OSError as exc:
        raise MalformedCurve(f"cannot read {path}: {exc.strerror}") from None


def _holonomy(model, text):
    try:
        return model.parse(text)
    except (ValueError, TypeError) as exc:
        raise MalformedCurve(f"bad holonomy {text!r} for {model.kind}: {exc}") from None


def _model(name):
    try:
        return groups.MODELS[name]
    except KeyError:
        raise MalformedCurve(f"unknown surface {name!r}") from None


def cmd_validate(args, out) -> int:
    report = validate_generic(_load(args.curve))
    _emit(report.to_json(), args.format, out)
    return EXIT_OK if report.ok else EXIT_NONGENERIC


def cmd_invariants(args, out) -> int:
    c = _load(args.curve)
    ref = None
    if args.ref == "canonical":
        ref = canonical_reference(c)
    elif args.ref is not None:
        ref = _holonomy(c.model, args.ref)
    _emit(compute_invariants(c, ref).to_json(), args.format, out)
    return EXIT_OK


def cmd_construct(args, out) -> int:
    model = _model(args.surface)
    c = build_w_k_curve(model, _holonomy(model, args.holonomy), args.kinks, args.seed)
    _write_text(dumps_curve(c), args.output, out)
    return EXIT_OK


def cmd_perturb(args, out) -> int:
    c = perturb(_load(args.curve), args.magnitude, args.seed, relative=args.relative)
    _write_text(dumps_curve(c), args.output, out)
    return EXIT_OK


def cmd_fuzz(args, out) -> int:
    if args.curve:
        jobs = [(args.curve, _load(args.curve))]
    else:
        jobs = []
        for surface, hol, k in FUZZ_DEFAULTS:
            model = groups.MODELS[surface]
            jobs.append((f"{surface} {hol} k={k}", build_w_k_curve(model, model.parse(hol), k, args.seed)))
    reports = []
    for name, c in jobs:
        rep = invariance_suite(c, args.trials, seed=args.seed, moves=args.moves).to_json()
        rep["curve"] = name
        reports.append(rep)
    ok = all(r["ok"] for r in reports)
    if args.format == "json":
        out.write(json.dumps({"ok": ok, "reports": reports}, indent=2, sort_keys=True) + "\n")
    else:
        for r in reports:
            out.write(f"{r['curve']}: case {r['case']}, value {r['baseline']}, {r['trials']} trials, "
                      f"{r['moves_applied']} moves, {len(r['violations'])} violations, "
                      f"pairs {json.dumps(r['pair_families'], sort_keys=True)}\n")
        out.write("ok\n" if ok else "FAILED\n")
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_render(args, out) -> int:
    _write_text(render_svg(_load(args.curve), args.translates), args.out, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvewind", description="Winding numbers of curves on flat and hyperbolic surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("validate", help="check that a curve is generic")
    sp.add_argument("curve")
    fmt(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("invariants", help="compute the winding-number invariant")
    sp.add_argument("curve")
    sp.add_argument("--ref", help="reference holonomy for non-reversible classes, or 'canonical'")
    fmt(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("construct", help="build a representative with k kinks")
    sp.add_argument("--surface", required=True, choices=sorted(groups.MODELS))
    sp.add_argument("--holonomy", required=True, help="e.g. 2,0 (torus, klein) or ab (sanov)")
    sp.add_argument("--kinks", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("perturb", help="move every vertex by a seeded random amount")
    sp.add_argument("curve")
    sp.add_argument("--magnitude", type=float, default=0.01)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--relative", action="store_true", help="scale by adjacent segment lengths")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("fuzz", help="random regular homotopies must not change the invariant")
    sp.add_argument("curve", nargs="?")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--moves", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    fmt(sp)
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("render", help="draw the curve, its translates and double points as SVG")
    sp.add_argument("curve")
    sp.add_argument("--out", default="-")
    sp.add_argument("--translates", type=int, default=1)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except MalformedCurve as exc:
        err.write(f"malformed input: {exc}\n")
        return EXIT_MALFORMED
    except NonGeneric as exc:
        err.write(f"non-generic curve: {exc}\n")
        return EXIT_NONGENERIC
    except (UnsupportedCase, IdentityHolonomy) as exc:
        err.write(f"unsupported case: {exc}\n")
        return EXIT_UNSUPPORTED
    except (AssertionError, CurvewindError) as exc:
        err.write(f"internal failure: {type(exc).__name__}: {exc}\n")
        return EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
