"""Command-line front end: ``mirrortoric {verify,polytope,fan,render}``.

Exit codes: 0 when everything passes, 1 when a verification check fails,
2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import scenarios
from .fan import fan_over_faces, skeleton
from .polytope import LatticePolytope, NotFullDimensional, dual, serialize_vector
from .render import render_face

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_polytope(path: str) -> LatticePolytope:
    try:
        return LatticePolytope.from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read polytope from {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    seed = int(os.environ.get("MIRRORTORIC_SEED", args.seed))
    names = list(scenarios.SUITES) if args.suite == "all" else [args.suite]
    if args.fixture and len(names) > 1:
        raise UsageError("--fixture needs a single --suite")
    try:
        fixture = scenarios.load_fixture(args.fixture) if args.fixture else None
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read fixture {args.fixture}: {exc}") from exc
    reports = [scenarios.SUITES[n](fixture, seed=seed, samples=args.samples) for n in names]
    if args.format == "text":
        text = "".join(r.to_text() for r in reports)
    else:
        body = reports[0].to_dict() if len(reports) == 1 else {"suites": [r.to_dict() for r in reports]}
        text = json.dumps(body, indent=1, sort_keys=True) + "\n"
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_polytope(args) -> int:
    P = _read_polytope(args.input)
    if args.op == "dual":
        try:
            body = json.loads(dual(P).to_json())
        except (NotFullDimensional, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    elif args.op == "faces":
        if args.dim is None or not 0 <= args.dim <= P.dim:
            raise UsageError(f"--dim must be between 0 and {P.dim}")
        body = [[serialize_vector(v) for v in F.vertices] for F in P.faces(args.dim)]
    else:
        body = [serialize_vector(p) for p in P.lattice_points()]
    print(json.dumps(body))
    return EXIT_OK


def cmd_fan(args) -> int:
    P = _read_polytope(args.input)
    try:
        F = fan_over_faces(P)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.dim is not None:
        F = skeleton(F, args.dim)
    print(F.to_json())
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        face = scenarios.face_complex(args.suite, args.face)
    except KeyError as exc:
        known = ", ".join(scenarios.face_names(args.suite))
        raise UsageError(f"unknown face {args.face!r}; known faces: {known}") from exc
    _emit(render_face(face), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mirrortoric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=[*scenarios.SUITES, "all"], default="all")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (MIRRORTORIC_SEED overrides)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--fixture", help="JSON file replacing the suite's shipped fixture")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("polytope", help="query a polytope given as JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--op", choices=["dual", "faces", "points"], required=True)
    p.add_argument("--dim", type=int)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("fan", help="fan over the faces of a polytope given as JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--dim", type=int, help="keep only cones up to this dimension")
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("render", help="draw a subdivided two-face as SVG")
    p.add_argument("--suite", choices=list(scenarios.SUITES), required=True)
    p.add_argument("--face", required=True)
    p.add_argument("--out", help="SVG path; stdout when omitted")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mirrortoric: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
