"""Batch command-line front end.

Every command reads graph/divisor JSON (inline, from a file, or from
stdin), dispatches to a library operation, and writes a single JSON
document to stdout.  Stdout is machine-readable exclusively; diagnostics
and structured errors go to stderr.  Outputs are deterministic: the same
inputs and flags produce byte-identical bytes.

Exit codes: 0 success, 2 input errors, 3 guard or oracle failures,
4 internal invariant violations (these print the falsifying instance).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .divisors import Divisor, Polarization, linearly_equivalent, vertex_divisor, zero_polarization
from .errors import InputError, TropabelError
from .graphs import MultiGraph, graph_from_json, graph_to_json
from .hemispheres import (HEMISPHERE_ENUMERATION_GUARD, convert_deg2,
                          enumerate_hemispheres, family_f)
from .hyperelliptic import find_witnesses
from .planner import blowup_plan, classify_node_pair, tails
from .quasistable import is_quasistable, oracle_quasistable_class, quasistable_rep
from .tropical import (OrientedEdge, is_quasistable_tropical, qs_abel2,
                       region_constancy, region_from_name,
                       tropical_point_from_json)

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _load_json_arg(raw: str, what: str):
    """Accept inline JSON, '-' for stdin, or a file path."""
    if raw == "-":
        text = sys.stdin.read()
    elif raw.lstrip().startswith("{"):
        text = raw
    else:
        try:
            with open(raw, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {what} from {raw!r}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed {what} JSON: {exc}") from None


def _graph(args) -> MultiGraph:
    return graph_from_json(_load_json_arg(args.graph, "graph"))


def _divisor(g: MultiGraph, raw: str) -> Divisor:
    data = _load_json_arg(raw, "divisor")
    if not isinstance(data, dict) or "values" not in data:
        raise InputError('divisor JSON needs a "values" object')
    try:
        values = {v: int(n) for v, n in data["values"].items()}
    except (TypeError, ValueError) as exc:
        raise InputError(f"divisor values must be integers: {exc}") from None
    return Divisor(g, values)


def _polarization(g: MultiGraph, raw: str | None) -> Polarization:
    if raw is None:
        return zero_polarization(g)
    data = _load_json_arg(raw, "polarization")
    if not isinstance(data, dict) or "values" not in data:
        raise InputError('polarization JSON needs a "values" object')
    try:
        values = {v: Fraction(q) for v, q in data["values"].items()}
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad polarization value: {exc}") from None
    return Polarization(g, values)


def _divisor_json(d: Divisor, verified: bool) -> dict:
    return {"v": SCHEMA_VERSION, "values": d.as_dict(), "verified": verified}


def _emit(doc: dict, args) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _denominators(raw: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise InputError(f"bad denominator list {raw!r}") from None
    if not out:
        raise InputError("denominator list is empty")
    return out


# -- command handlers --------------------------------------------------------


def _cmd_qs(args):
    g = _graph(args)
    d = _divisor(g, args.divisor)
    mu = _polarization(g, args.mu)
    rep = quasistable_rep(g, d, args.v0, mu)
    verified = (is_quasistable(g, rep, args.v0, mu,
                               connected_only=args.connected_subsets_only)
                and linearly_equivalent(g, rep, d, args.v0))
    return _divisor_json(rep, verified)


def _cmd_oracle(args):
    g = _graph(args)
    d = _divisor(g, args.divisor)
    mu = _polarization(g, args.mu)
    rep = oracle_quasistable_class(g, d, args.v0, mu, box_guard=args.box_guard)
    return _divisor_json(rep, True)


def _cmd_convert(args):
    g = _graph(args)
    rep = convert_deg2(g, args.v0, args.v1, args.v2)
    doc = _divisor_json(rep, True)
    doc["family"] = family_f(g, args.v0, args.v1, args.v2).as_json()
    return doc


def _cmd_hemispheres(args):
    g = _graph(args)
    hems = enumerate_hemispheres(g, args.delta, guard=args.hemisphere_guard)
    return {"v": SCHEMA_VERSION, "hemispheres": [h.as_json() for h in hems]}


def _cmd_tails(args):
    g = _graph(args)
    deltas = {int(x) for x in args.deltas.split(",")}
    return {"v": SCHEMA_VERSION,
            "tails": [h.as_json() for h in tails(g, args.v0, deltas)]}


def _cmd_plan(args):
    g = _graph(args)
    doc = blowup_plan(g, args.v0).as_json()
    doc["v"] = SCHEMA_VERSION
    return doc


def _cmd_classify(args):
    g = _graph(args)
    rec = classify_node_pair(g, args.v0, args.e1, args.e2,
                             denominators=_denominators(args.denominators))
    doc = rec.as_json()
    doc["v"] = SCHEMA_VERSION
    return doc


def _cmd_abel2(args):
    g = _graph(args)
    d_dagger = (_divisor(g, args.d_dagger) if args.d_dagger
                else vertex_divisor(g, (args.v0, 2)))
    mu = _polarization(g, args.mu)
    p1 = tropical_point_from_json(g, _load_json_arg(args.p1, "point"))
    p2 = tropical_point_from_json(g, _load_json_arg(args.p2, "point"))
    rep = qs_abel2(g, args.v0, d_dagger, mu, p1, p2)
    doc = rep.as_json()
    doc["v"] = SCHEMA_VERSION
    doc["verified"] = is_quasistable_tropical(g, rep, args.v0, mu)
    return doc


def _cmd_region(args):
    g = _graph(args)
    d_dagger = (_divisor(g, args.d_dagger) if args.d_dagger
                else vertex_divisor(g, (args.v0, 2)))
    mu = _polarization(g, args.mu)
    report = region_constancy(
        g, args.v0, d_dagger, mu,
        OrientedEdge(args.e1, reverse=args.reverse1),
        OrientedEdge(args.e2, reverse=args.reverse2),
        region_from_name(args.region),
        denominators=_denominators(args.denominators),
        jobs=args.jobs)
    doc = report.as_json()
    doc["v"] = SCHEMA_VERSION
    return doc


def _cmd_hyper_scan(args):
    g = _graph(args)
    witnesses = find_witnesses(g)
    return {"v": SCHEMA_VERSION,
            "pseudo_hyperelliptic": bool(witnesses),
            "witnesses": [w.as_json() for w in witnesses]}


def _cmd_echo_graph(args):
    g = _graph(args)
    doc = graph_to_json(g)
    doc["v"] = SCHEMA_VERSION
    return doc


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropabel",
                     description="quasistable divisors and degree-2 Abel map "
                                 "combinatorics on multigraphs")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--graph", required=True,
                       help="graph JSON: inline, a file path, or '-' for stdin")
        p.add_argument("--output", default="-", help="output path (default stdout)")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for sample evaluation")

    p = sub.add_parser("qs", help="quasistable representative of a divisor")
    common(p)
    p.add_argument("--divisor", required=True)
    p.add_argument("--v0", required=True)
    p.add_argument("--mu")
    p.add_argument("--connected-subsets-only", action="store_true",
                   help="quantify the verification over connected subsets only "
                        "(provably equivalent; provided as a convention flag)")
    p.set_defaults(handler=_cmd_qs)

    p = sub.add_parser("oracle", help="brute-force oracle for the representative")
    common(p)
    p.add_argument("--divisor", required=True)
    p.add_argument("--v0", required=True)
    p.add_argument("--mu")
    p.add_argument("--box-guard", type=int, default=2_000_000)
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("convert", help="quasistable form of 2*v0 - v1 - v2")
    common(p)
    p.add_argument("--v0", required=True)
    p.add_argument("--v1", required=True)
    p.add_argument("--v2", required=True)
    p.set_defaults(handler=_cmd_convert)

    p = sub.add_parser("hemispheres", help="enumerate hemispheres")
    common(p)
    p.add_argument("--delta", type=int)
    p.add_argument("--hemisphere-guard", type=int,
                   default=HEMISPHERE_ENUMERATION_GUARD)
    p.set_defaults(handler=_cmd_hemispheres)

    p = sub.add_parser("tails", help="tails avoiding the marked vertex")
    common(p)
    p.add_argument("--v0", required=True)
    p.add_argument("--deltas", default="2,3")
    p.set_defaults(handler=_cmd_tails)

    p = sub.add_parser("plan", help="global blowup plan")
    common(p)
    p.add_argument("--v0", required=True)
    p.set_defaults(handler=_cmd_plan)

    p = sub.add_parser("classify", help="classify the resolution at a node pair")
    common(p)
    p.add_argument("--v0", required=True)
    p.add_argument("--e1", required=True)
    p.add_argument("--e2", required=True)
    p.add_argument("--denominators", default="3,4,5,7")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("abel2", help="quasistable representative of D - p1 - p2")
    common(p)
    p.add_argument("--v0", required=True)
    p.add_argument("--d-dagger", help="divisor JSON (default: 2*v0)")
    p.add_argument("--mu")
    p.add_argument("--p1", required=True, help='point JSON, e.g. {"edge":"e0","t":"1/3"}')
    p.add_argument("--p2", required=True)
    p.set_defaults(handler=_cmd_abel2)

    p = sub.add_parser("region", help="sample a constancy region")
    common(p)
    p.add_argument("--v0", required=True)
    p.add_argument("--d-dagger")
    p.add_argument("--mu")
    p.add_argument("--e1", required=True)
    p.add_argument("--e2", required=True)
    p.add_argument("--reverse1", action="store_true",
                   help="measure the first coordinate from e1's target")
    p.add_argument("--reverse2", action="store_true")
    p.add_argument("--region", required=True,
                   help="X_LT_Y | Y_LT_X | X_LT_1MY | 1MY_LT_X | FULL_SQUARE")
    p.add_argument("--denominators", default="3,4,5,7")
    p.set_defaults(handler=_cmd_region)

    p = sub.add_parser("hyper-scan", help="non-injectivity witnesses")
    common(p)
    p.set_defaults(handler=_cmd_hyper_scan)

    p = sub.add_parser("echo-graph", help="parse and re-emit a graph canonically")
    common(p)
    p.set_defaults(handler=_cmd_echo_graph)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc = args.handler(args)
        _emit(doc, args)
        return 0
    except TropabelError as exc:
        err = {"v": SCHEMA_VERSION,
               "error": {"type": type(exc).__name__,
                         "message": str(exc),
                         "detail": exc.detail}}
        sys.stderr.write(json.dumps(err, sort_keys=True, indent=2, default=str) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
