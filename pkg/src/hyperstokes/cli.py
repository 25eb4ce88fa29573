"""Command line interface: one JSON document on stdout, logs on stderr.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input
(schema, arguments, lambda outside the domain), 3 non-generic arrangement.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

from .arrangement import GenericityError, analyze, validate_genericity
from .instances import points_on_line, triangle
from .io import (
    ResultBundle,
    SchemaError,
    arrangement_to_dict,
    geometry_fields,
    integral_to_dict,
    parse_arrangement,
    report_to_dict,
    stokes_fields,
)
from .ode import build_ode
from .quadrature import QuadConfig, chamber_integrals, cone_integrals, select_rho
from .stokes import example1_oracle, example2_oracle, stokes_matrices
from .verify import CHECK_NAMES, run_checks

log = logging.getLogger("hyperstokes")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_GENERICITY = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _indices(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(t) for t in text.replace(" ", "").split(",") if t))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated labels, got {text!r}")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _complex_list(text: str) -> list[complex]:
    return [_complex(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _read_arrangement(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read arrangement: {exc}") from None
    return parse_arrangement(doc)


def _geometry(arr):
    violations = validate_genericity(arr)
    if violations:
        raise GenericityError(violations)
    return analyze(arr)


def _config(args) -> QuadConfig:
    cfg = QuadConfig()
    if args.quad_tol is not None:
        cfg = replace(cfg, rel_tol=args.quad_tol)
    if args.max_nodes is not None:
        cfg = replace(cfg, max_nodes=args.max_nodes)
    return cfg


def cmd_analyze(args) -> tuple[ResultBundle, int]:
    geo = _geometry(_read_arrangement(args.arrangement))
    return ResultBundle("analyze", **geometry_fields(geo)), EXIT_OK


def _stokes_bundle(command: str, geo) -> ResultBundle:
    fields_ = geometry_fields(geo)
    fields_.update(stokes_fields(build_ode(geo), stokes_matrices(geo)))
    return ResultBundle(command, **fields_)


def cmd_stokes(args) -> tuple[ResultBundle, int]:
    return _stokes_bundle("stokes", _geometry(_read_arrangement(args.arrangement))), EXIT_OK


def cmd_integrate(args) -> tuple[ResultBundle, int]:
    geo = _geometry(_read_arrangement(args.arrangement))
    cfg = _config(args)
    if args.target not in geo.position:
        raise InputError(f"{list(args.target)} is not a vertex")
    x = geo.vertex(args.target)
    if args.component is not None:
        if args.component not in geo.position:
            raise InputError(f"{list(args.component)} is not a vertex")
        idx = geo.position[args.component]
    lam = args.lam
    try:
        if args.kind == "chamber":
            values = chamber_integrals(geo, geo.delta[x.indices], lam, cfg)
        else:
            sign = 1 if args.kind == "cone_plus" else -1
            values = cone_integrals(geo, x, lam, select_rho(lam, sign), cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    items = [integral_to_dict(v, x.indices, geo.vertices[i].indices) for i, v in enumerate(values)]
    if args.component is not None:
        items = [items[idx]]
    return ResultBundle("integrate", arrangement=arrangement_to_dict(geo.arr), integrals=items), EXIT_OK


def cmd_verify(args) -> tuple[ResultBundle, int]:
    geo = _geometry(_read_arrangement(args.arrangement))
    names = CHECK_NAMES if args.checks == ["all"] else args.checks
    unknown = [n for n in names if n not in CHECK_NAMES]
    if unknown:
        raise InputError(f"unknown checks {unknown}; choose from {', '.join(CHECK_NAMES)}")
    reports = run_checks(geo, names, args.lam, args.tol, _config(args))
    for r in reports:
        log.info("%s: %s (residual %.3g, tolerance %.3g)", r.name,
                 "PASS" if r.passed else "FAIL", r.max_relative_residual, r.tolerance)
    bundle = ResultBundle("verify", arrangement=arrangement_to_dict(geo.arr),
                          checks=[report_to_dict(r) for r in reports])
    return bundle, EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def _demo_weights(args, n: int) -> list[float]:
    if args.weights is not None:
        if len(args.weights) != n:
            raise InputError(f"expected {n} weights, got {len(args.weights)}")
        return args.weights
    return [round(float(w), 6) for w in np.random.default_rng(args.seed).uniform(0.2, 0.8, n)]


def cmd_demo(args) -> tuple[ResultBundle, int]:
    if args.example == "example1":
        if args.n < 1:
            raise InputError("--n must be positive")
        weights = _demo_weights(args, args.n)
        points = list(range(args.n))
        arr = points_on_line(points, weights)
        oracle = example1_oracle(points, weights)
    else:
        a, b = Fraction(args.a), Fraction(args.b)
        weights = _demo_weights(args, 3)
        try:
            arr = triangle(a, b, weights)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        oracle = example2_oracle(a, b, weights)
    geo = _geometry(arr)
    bundle = _stokes_bundle(f"demo {args.example}", geo)
    st = stokes_matrices(geo)
    bundle.oracle_max_abs_difference = float(max(np.abs(st.c0 - oracle.c0).max(),
                                                 np.abs(st.c1 - oracle.c1).max()))
    return bundle, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperstokes", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for sampled weights")
    p.add_argument("--quad-tol", type=float, default=None, help="relative quadrature tolerance")
    p.add_argument("--max-nodes", type=int, default=None, help="node budget per integral")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("arrangement", nargs="?", default="-", help="arrangement JSON file ('-' = stdin)")
        return sp

    with_input(sub.add_parser("analyze", help="vertices, chambers, D+ and vertex pairs"))
    with_input(sub.add_parser("stokes", help="ODE matrices and Stokes matrices"))
    sp = with_input(sub.add_parser("integrate", help="one chamber or cone integral vector"))
    sp.add_argument("--kind", choices=("chamber", "cone_plus", "cone_minus"), required=True)
    sp.add_argument("--target", type=_indices, required=True,
                    help="vertex X, e.g. 1,2 (chamber kind integrates over Delta_X)")
    sp.add_argument("--component", type=_indices, default=None, help="vertex X' of the form")
    sp.add_argument("--lambda", dest="lam", type=_complex, required=True)
    sp = with_input(sub.add_parser("verify", help="numerical checks of the integral identities"))
    sp.add_argument("--checks", type=lambda t: [c.strip() for c in t.split(",") if c.strip()],
                    default=["all"], help=f"comma list from {', '.join(CHECK_NAMES)} or 'all'")
    sp.add_argument("--lambda", dest="lam", type=_complex_list, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp = sub.add_parser("demo", help="built-in examples with their closed-form matrices")
    demo = sp.add_subparsers(dest="example", required=True)
    e1 = demo.add_parser("example1", help="points 0, 1, ..., n-1 on the line")
    e1.add_argument("--n", type=int, default=2)
    e1.add_argument("--weights", type=_float_list, default=None)
    e2 = demo.add_parser("example2", help="the triangle x, y, x + y - 1 with f0 = a x + b y")
    e2.add_argument("--a", type=str, default="2")
    e2.add_argument("--b", type=str, default="1")
    e2.add_argument("--weights", type=_float_list, default=None)
    return p


COMMANDS = {"analyze": cmd_analyze, "stokes": cmd_stokes, "integrate": cmd_integrate,
            "verify": cmd_verify, "demo": cmd_demo}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level=logging.WARNING - 10 * min(args.verbose, 2))
    try:
        bundle, code = COMMANDS[args.command](args)
    except (SchemaError, InputError) as exc:
        bundle = ResultBundle(args.command, error={"type": "invalid-input", "message": str(exc)})
        code = EXIT_INPUT
    except GenericityError as exc:
        bundle = ResultBundle(args.command, error={
            "type": "non-generic",
            "violations": [{"kind": v.kind, "indices": list(v.indices), "message": v.message}
                           for v in exc.violations]})
        code = EXIT_GENERICITY
    if bundle.error:
        log.error("%s", bundle.error.get("message", bundle.error["type"]))
    sys.stdout.write(bundle.dumps() + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
