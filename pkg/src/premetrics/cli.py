"""Command line front end.

Exit codes: 0 success or pass, 1 verification failure (the report carries
a counterexample), 2 input error (a JSON diagnostic goes to stderr).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .colimits import DEFAULT_MAX_FUNCTIONS, coequaliser, coproduct, final_lift
from .errors import PremetricError
from .io import InputError
from .lattice import FiniteLattice
from .limits import DEFAULT_MAX_GROUND, equaliser, initial_lift, product
from .space import (
    ContinuitySpace,
    enumerate_topologies,
    eps_delta_witness,
    flagg,
    generate_topology,
    is_top_continuous,
    premetrize,
)
from . import verify as V


class Failure(Exception):
    """Raised by a command whose verification verdict is negative."""

    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


def _read(path, parse, where):
    obj = io.load(path)
    try:
        return parse(obj, where)
    except InputError as exc:
        exc.path = exc.path or str(path)
        raise
    except PremetricError as exc:
        raise InputError(str(exc), str(path), exc.__class__.__name__) from None
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed input: {exc}", str(path)) from None


def _space(path):
    return _read(path, io.space_from_json, "space")


def _topology(path):
    return _read(path, io.topology_from_json, "topology")


def _with_legs(space, legs):
    out = io.space_to_json(space)
    out["legs"] = [{x: leg.assignment[x] for x in sorted(leg.assignment)} for leg in legs]
    return out


# -- commands ---------------------------------------------------------------


def cmd_lattice_check(args):
    L = _read(args.lattice, io.lattice_from_json, "lattice")
    if args.format == "dot":
        if not isinstance(L, FiniteLattice):
            raise InputError("DOT output needs a finite lattice", args.lattice, "kind")
        return io.lattice_to_dot(L)
    report = {"lattice": L.to_json(), "value_distributive": L.is_value_distributive()}
    if isinstance(L, FiniteLattice):
        report["completely_distributive"] = L.is_completely_distributive()
        report["positives"] = L.positives()
        report["witness"] = L.value_distributivity_witness()
    if not report["value_distributive"]:
        raise Failure(report)
    return report


def cmd_space_topology(args):
    S = _space(args.space)
    T = generate_topology(S)
    if args.format == "dot":
        return io.topology_to_dot(T)
    return io.topology_to_json(T)


def cmd_space_flagg(args):
    return io.space_to_json(flagg(_topology(args.topology)))


def cmd_space_premetrize(args):
    return io.space_to_json(premetrize(_topology(args.topology)))


def cmd_map_check(args):
    f = _read(args.map, io.map_from_json, "map")
    report = {"top_continuous": is_top_continuous(f)}
    if isinstance(f.source, ContinuitySpace) and isinstance(f.target, ContinuitySpace):
        w = eps_delta_witness(f)
        report["eps_delta_continuous"] = w is None
        if w is not None:
            report["witness"] = {"point": w[0], "eps": f.target.lattice.value_to_json(w[1])}
            raise Failure(report)
    elif not report["top_continuous"]:
        raise Failure(report)
    return report


def cmd_limit_product(args):
    P, legs = product([_space(p) for p in args.spaces], args.max_ground)
    return _with_legs(P, legs)


def cmd_limit_equalise(args):
    f = _read(args.f, io.map_from_json, "map")
    g = _read(args.g, io.map_from_json, "map")
    Z, incl = equaliser(f, g)
    return _with_legs(Z, [incl])


def cmd_limit_initial(args):
    cone = _read(args.cone, io.cone_from_json, "cone")
    S, legs = initial_lift(cone, args.max_ground)
    return _with_legs(S, legs)


def cmd_colimit_coproduct(args):
    C, legs = coproduct([_space(p) for p in args.spaces])
    return _with_legs(C, legs)


def cmd_colimit_coequalise(args):
    S = _space(args.space)
    blocks = _read(args.relation, io.relation_from_json, "relation")
    Q, q = coequaliser(S, blocks, args.max_functions)
    return _with_legs(Q, [q])


def cmd_colimit_final(args):
    legs, apex = _read(args.cocone, io.cocone_from_json, "cocone")
    S, maps = final_lift(legs, apex, args.max_functions)
    return _with_legs(S, maps)


def _probes(obj, path):
    if "probes" not in obj:
        return None
    return [_read_obj(p, io.space_from_json, f"probes[{k}]", path) for k, p in enumerate(obj["probes"])]


def _read_obj(obj, parse, where, path):
    try:
        return parse(obj, where)
    except InputError as exc:
        exc.path = exc.path or str(path)
        raise
    except PremetricError as exc:
        raise InputError(str(exc), str(path), where) from None


def _instance(path, side):
    obj = io.load(path)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("missing field 'kind'", str(path), "kind")
    kind = obj["kind"]
    probes = _probes(obj, path)
    if side == "limit" and kind == "product":
        spaces = [_read_obj(s, io.space_from_json, f"spaces[{k}]", path) for k, s in enumerate(obj.get("spaces", []))]
        return product(spaces), V.product_diagram(spaces), probes
    if side == "limit" and kind == "equaliser":
        f = _read_obj(obj.get("f"), io.map_from_json, "f", path)
        g = _read_obj(obj.get("g"), io.map_from_json, "g", path)
        cand, diagram = V.equaliser_instance(f, g)
        return cand, diagram, probes
    if side == "colimit" and kind == "coproduct":
        spaces = [_read_obj(s, io.space_from_json, f"spaces[{k}]", path) for k, s in enumerate(obj.get("spaces", []))]
        return coproduct(spaces), V.product_diagram(spaces), probes
    if side == "colimit" and kind == "coequaliser":
        S = _read_obj(obj.get("space"), io.space_from_json, "space", path)
        blocks = _read_obj(obj.get("relation"), io.relation_from_json, "relation", path)
        cand, diagram = V.coequaliser_instance(S, blocks)
        return cand, diagram, probes
    raise InputError(f"unknown {side} kind {kind!r}", str(path), "kind")


def _report(r: V.VerificationReport):
    out = r.to_json()
    if not r.verdict:
        raise Failure(out)
    return out


def cmd_verify_round_trip(args):
    return _report(V.round_trip_suite(args.n))


def cmd_verify_adjunction(args):
    T = _topology(args.topology)
    return _report(V.check_adjunction(T, max_functions=args.max_functions))


def cmd_verify_limit(args):
    cand, diagram, probes = _instance(args.instance, "limit")
    return _report(V.check_limit(cand, diagram, probes, Path(args.instance).name, args.max_functions))


def cmd_verify_colimit(args):
    cand, diagram, probes = _instance(args.instance, "colimit")
    return _report(V.check_colimit(cand, diagram, probes, Path(args.instance).name, args.max_functions))


def cmd_verify_gap(args):
    return _report(V.continuity_gap_search(_space(args.source), _space(args.target), max_functions=args.max_functions))


def cmd_enum_topologies(args):
    tops = list(enumerate_topologies(args.n))
    if args.count:
        return len(tops)
    return [io.topology_to_json(T) for T in tops]


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("--max-ground", type=int, default=DEFAULT_MAX_GROUND, help="cap on product ground size")
    common.add_argument("--max-functions", type=int, default=DEFAULT_MAX_FUNCTIONS, help="cap on enumerated functions")

    parser = argparse.ArgumentParser(prog="premetrics", description="Continuity spaces over value distributive lattices.")
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help):
        p = group.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("lattice").add_subparsers(dest="cmd", required=True)
    p = sub(g, "check", cmd_lattice_check, "distributivity report for a lattice")
    p.add_argument("lattice")
    p.add_argument("--format", choices=["json", "dot"], default="json")

    g = groups.add_parser("space").add_subparsers(dest="cmd", required=True)
    p = sub(g, "topology", cmd_space_topology, "generated topology of a space")
    p.add_argument("space")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    sub(g, "flagg", cmd_space_flagg, "Ω-valued space of a topology").add_argument("topology")
    sub(g, "premetrize", cmd_space_premetrize, "0/1 premetric of a topology").add_argument("topology")

    g = groups.add_parser("map").add_subparsers(dest="cmd", required=True)
    sub(g, "check", cmd_map_check, "continuity of a map").add_argument("map")

    g = groups.add_parser("limit").add_subparsers(dest="cmd", required=True)
    sub(g, "product", cmd_limit_product, "product of spaces").add_argument("spaces", nargs="*")
    p = sub(g, "equalise", cmd_limit_equalise, "equaliser of two parallel maps")
    p.add_argument("f")
    p.add_argument("g")
    sub(g, "initial", cmd_limit_initial, "initial lift of a cone").add_argument("cone")

    g = groups.add_parser("colimit").add_subparsers(dest="cmd", required=True)
    sub(g, "coproduct", cmd_colimit_coproduct, "coproduct of spaces").add_argument("spaces", nargs="*")
    p = sub(g, "coequalise", cmd_colimit_coequalise, "quotient by a partition")
    p.add_argument("space")
    p.add_argument("relation")
    sub(g, "final", cmd_colimit_final, "final lift of a cocone").add_argument("cocone")

    g = groups.add_parser("verify").add_subparsers(dest="cmd", required=True)
    sub(g, "round-trip", cmd_verify_round_trip, "round trips on all topologies").add_argument("-n", type=int, required=True)
    sub(g, "adjunction", cmd_verify_adjunction, "hom-set agreement for a topology").add_argument("topology")
    sub(g, "limit", cmd_verify_limit, "universal property of a limit").add_argument("instance")
    sub(g, "colimit", cmd_verify_colimit, "universal property of a colimit").add_argument("instance")
    p = sub(g, "gap", cmd_verify_gap, "continuous maps that are not ε-δ continuous")
    p.add_argument("source")
    p.add_argument("target")

    g = groups.add_parser("enum").add_subparsers(dest="cmd", required=True)
    p = sub(g, "topologies", cmd_enum_topologies, "all labeled topologies on n points")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--count", action="store_true")
    return parser


def _emit(result, output):
    text = result if isinstance(result, str) else io.dumps(result)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except Failure as exc:
        _emit(exc.payload, args.output)
        return 1
    except InputError as exc:
        sys.stderr.write(io.dumps(exc.to_json()))
        return 2
    except PremetricError as exc:
        sys.stderr.write(io.dumps({"error": str(exc), "file": None, "field": exc.__class__.__name__}))
        return 2
    _emit(result, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
