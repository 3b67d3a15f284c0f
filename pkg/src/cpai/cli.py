"""Command-line front end.

Subcommands: analyze (full report), polytope (face lattice dump),
transform (face transform dump), verify (witness curves against a
report), examples (bundled fixtures diffed against stored outputs).
Exit codes: 1 input/parse errors, 2 analysis failures, 3 fixture
mismatches.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import __version__
from .analysis import analyze
from .laurent import ParseError, parse, to_text
from .polytope import newton_polytope, scale_to_normal
from .toric import height_limit, infinity_point, span_coordinates
from .transform import build_face_transform, reduce_to_full_dimension, transform_polynomial
from .witness import cross_check, curves_from_json, sample_limits

EXIT_INPUT = 1
EXIT_ANALYSIS = 2
EXIT_DIFF = 3

FIXTURES = (
    ("quadrilateral", "1+x+x^2+x*y+x^2*y", ("x", "y")),
    ("paraboloid", "1-2*x+x^2+1-2*y+y^2-z", ("x", "y", "z")),
    ("pinched-edge", "z-y-(x-1)^2", ("x", "y", "z")),
)


def _fail(message, code):
    print(f"error: {message}", file=sys.stderr)
    return code


def _parse_vars(text):
    names = [v.strip() for v in text.split(",") if v.strip()]
    if not names:
        raise ValueError("no variable names given")
    return names


def _parse_polynomial(args):
    variables = _parse_vars(args.vars)
    H = parse(args.polynomial, variables)
    if H.is_zero:
        raise ValueError("the zero polynomial cannot be analyzed")
    if len(H) == 1:
        raise ValueError("a single monomial has no zero set in the torus")
    return H, variables


def _reduced(H, variables):
    """Apply the monomial change of coordinates when the Newton polytope
    is not full-dimensional."""
    H_red, info = reduce_to_full_dimension(H)
    if info is None:
        return H, list(variables), None
    g = H_red.dimension
    new_vars = [f"u{i+1}" for i in range(g)]
    note = {
        "reduced": True,
        "original_variables": list(variables),
        "anchor": list(info["anchor"]),
        "basis": [list(b) for b in info["basis"]],
        "variables": new_vars,
    }
    return H_red, new_vars, note


def _dump(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    return _render_text(payload)


def _render_text(payload, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {value}")
    else:
        lines.append(f"{pad}{payload}")
    return "\n".join(line for line in lines if line)


def _workers():
    raw = os.environ.get("CPAI_WORKERS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


def _direction_section(report, direction):
    """Heights of a requested rational direction at every reported
    singular point, when the direction is parallel to the face."""
    r = [Fraction(v) for v in direction]
    entries = []
    for verdict in report.verdicts:
        face = verdict.face
        lam = 1
        for f in r:
            lam = lam * f.denominator // __import__("math").gcd(lam, f.denominator)
        in_span = span_coordinates(face, [int(v * lam) for v in r]) is not None
        heights = []
        for record in verdict.singular_points:
            p = infinity_point(face, record.face_coordinates)
            value = height_limit(face, p, r)
            if value is None:
                heights.append("undetermined")
            elif value == float("inf"):
                heights.append("+inf")
            elif value == float("-inf"):
                heights.append("-inf")
            else:
                heights.append(value)
        entries.append(
            {
                "face_id": verdict.face_id,
                "parallel_to_face": in_span,
                "heights_at_singular_points": heights,
            }
        )
    return {"direction": [str(v) for v in direction], "faces": entries}


def cmd_analyze(args):
    try:
        H, variables = _parse_polynomial(args)
    except (ParseError, ValueError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    try:
        H, variables, note = _reduced(H, variables)
        report = analyze(
            H, variables, rank_tol=args.tol_rank, workers=_workers()
        )
        payload = report.to_json()
        payload["version"] = __version__
        if note:
            payload["reduction"] = note
        if args.direction:
            direction = [Fraction(v) for v in args.direction.split(",")]
            if len(direction) != H.dimension:
                return _fail("direction length does not match dimension", EXIT_INPUT)
            payload["requested_direction"] = _direction_section(report, direction)
    except (ParseError, ValueError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    except Exception as exc:  # analysis failures exit with their own code
        return _fail(f"analysis failed: {exc}", EXIT_ANALYSIS)
    print(_dump(payload, args.format))
    return 0


def cmd_polytope(args):
    try:
        H, variables = _parse_polynomial(args)
        H, variables, note = _reduced(H, variables)
        P = newton_polytope(H)
        Q, kappa = scale_to_normal(P)
        payload = {
            "schema": "cpai.polytope.v1",
            "version": __version__,
            "variables": list(variables),
            "newton_polytope": {
                "dim": P.dim,
                "vertices": [list(v) for v in P.vertices],
                "halfspaces": [
                    {"normal": list(n), "offset": c} for n, c in P.halfspaces
                ],
            },
            "kappa": kappa,
            "scaled_polytope": {
                "vertices": [list(v) for v in Q.vertices],
                "lattice_point_count": len(Q.lattice_points()),
            },
            "faces": Q.face_lattice_json(),
        }
        if note:
            payload["reduction"] = note
    except (ParseError, ValueError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    except Exception as exc:
        return _fail(f"polytope computation failed: {exc}", EXIT_ANALYSIS)
    print(_dump(payload, args.format))
    return 0


def cmd_transform(args):
    try:
        H, variables = _parse_polynomial(args)
        H, variables, _ = _reduced(H, variables)
    except (ParseError, ValueError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    try:
        P = newton_polytope(H)
        Q, kappa = scale_to_normal(P)
        faces = Q.face_lattice()
        if args.face < 0 or args.face >= len(faces):
            return _fail(f"face id must be in [0, {len(faces) - 1}]", EXIT_INPUT)
        FQ = faces[args.face]
        if not FQ.is_proper:
            return _fail("the whole polytope needs no transform", EXIT_INPUT)
        verts = [tuple(x // kappa for x in v) for v in FQ.vertices]
        FP = P.face_by_vertices(verts)
        T = build_face_transform(FP)
        import warnings as w

        with w.catch_warnings(record=True) as caught:
            w.simplefilter("always")
            Hbar = transform_polynomial(H, FP.vertex_anchor, T)
        Pbar = newton_polytope(Hbar)
        payload = {
            "schema": "cpai.transform.v1",
            "version": __version__,
            "face_id": FQ.face_id,
            "anchor": list(FP.vertex_anchor),
            "matrix": [list(r) for r in T.matrix],
            "matrix_transpose": [list(r) for r in T.matrix_transpose],
            "unimodular": T.unimodular,
            "warnings": list(T.warnings) + [str(c.message) for c in caught],
            "transformed_polynomial": to_text(Hbar, variables),
            "transformed_polytope": {
                "dim": Pbar.dim,
                "vertices": [list(v) for v in Pbar.vertices],
            },
        }
    except ValueError as exc:
        return _fail(str(exc), EXIT_ANALYSIS)
    except Exception as exc:
        return _fail(f"transform failed: {exc}", EXIT_ANALYSIS)
    print(_dump(payload, args.format))
    return 0


def cmd_verify(args):
    try:
        H, variables = _parse_polynomial(args)
        with open(args.curves) as fh:
            curves = curves_from_json(json.load(fh))
    except (ParseError, ValueError, OSError, KeyError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    try:
        report = analyze(H, variables, rank_tol=args.tol_rank, workers=_workers())
        discrepancies, estimates = cross_check(
            report, curves, tol=args.tol_conv
        )
        payload = {
            "schema": "cpai.verify.v1",
            "version": __version__,
            "estimates": [
                {"curve": curve.label, "r": list(r) if r else None,
                 **est.to_json()}
                if est is not None
                else {"curve": curve.label, "r": list(r) if r else None,
                      "status": "off_variety"}
                for (curve, r), est in zip(curves, estimates)
            ],
            "discrepancies": discrepancies,
        }
    except (ParseError, ValueError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    except Exception as exc:
        return _fail(f"verification failed: {exc}", EXIT_ANALYSIS)
    print(_dump(payload, args.format))
    return 0


def _fixture_payload(name, text, variables):
    H = parse(text, list(variables))
    report = analyze(H, variables)
    payload = report.to_json()
    payload["fixture"] = name
    payload["version"] = __version__
    return payload


def _fixture_path(name):
    return resources.files("cpai").joinpath("fixtures", f"{name}.json")


def cmd_examples(args):
    failures = 0
    for name, text, variables in FIXTURES:
        payload = json.dumps(
            _fixture_payload(name, text, variables), sort_keys=True, indent=2
        )
        path = _fixture_path(name)
        if args.regenerate:
            with resources.as_file(path) as real:
                real.parent.mkdir(parents=True, exist_ok=True)
                real.write_text(payload + "\n")
            print(f"wrote {name}")
            continue
        try:
            expected = path.read_text()
        except FileNotFoundError:
            print(f"FAIL {name}: no stored output")
            failures += 1
            continue
        if expected.strip() == payload.strip():
            print(f"PASS {name}")
        else:
            print(f"FAIL {name}: output differs from the stored fixture")
            failures += 1
    return EXIT_DIFF if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cpai",
        description=(
            "Decide where critical points at infinity can occur for a "
            "Laurent polynomial, whether they are heighted, and what their "
            "critical values at infinity are."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_poly=True):
        if needs_poly:
            p.add_argument("polynomial", help="polynomial expression")
            p.add_argument(
                "--vars",
                default="x,y,z",
                help="comma-separated variable names (default x,y,z)",
            )
        p.add_argument(
            "--format", choices=("json", "text"), default="json",
            help="output format",
        )

    p = sub.add_parser("analyze", help="full critical-point report")
    add_common(p)
    p.add_argument("--direction", help="rational direction, e.g. -2,-1,1")
    p.add_argument("--tol-rank", type=float, default=1e-8,
                   help="singular-value threshold for rank decisions")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("polytope", help="Newton polytope and face lattice")
    add_common(p)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("transform", help="face transform and moved polynomial")
    add_common(p)
    p.add_argument("--face", type=int, required=True, help="face id")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="witness curves against the report")
    add_common(p)
    p.add_argument("--curves", required=True, help="curve JSON file")
    p.add_argument("--tol-rank", type=float, default=1e-8)
    p.add_argument("--tol-conv", type=float, default=1e-5,
                   help="chordal tolerance for limit containment")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", help="run bundled fixtures and diff")
    add_common(p, needs_poly=False)
    p.add_argument("--regenerate", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
