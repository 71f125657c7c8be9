"""Brute-force checks of universal properties, the adjunction, and round trips.

Every check enumerates functions exhaustively over small probe spaces; no
claim is accepted because of how a candidate was built.  Failing reports
carry a JSON counterexample that :func:`replay` re-runs through the base
checkers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Sequence

from . import io
from .colimits import DEFAULT_MAX_FUNCTIONS, blocks_to_assignment, coequaliser, coproduct, tagged
from .errors import ProbeTooLarge
from .instances import CHAIN2, default_probes
from .lattice import iter_bits
from .limits import equaliser, product, tuple_id
from .space import (
    ContinuitySpace,
    FiniteTopology,
    SpaceMap,
    all_functions,
    enumerate_topologies,
    eps_delta_witness,
    flagg,
    generate_topology,
    is_eps_delta_continuous,
    is_top_continuous,
    premetrize,
)


@dataclass
class VerificationReport:
    claim: str
    instance: str
    verdict: bool
    counterexample: dict | None = None
    checked: int = 0
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "instance": self.instance,
            "verdict": "pass" if self.verdict else "fail",
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def merge_reports(reports: Sequence[VerificationReport]) -> dict:
    ordered = sorted(reports, key=lambda r: (r.claim, r.instance))
    return {
        "verdict": "pass" if all(r.verdict for r in ordered) else "fail",
        "reports": [r.to_json() for r in ordered],
    }


@dataclass
class Diagram:
    """Objects plus arrows ``(source index, target index, map)`` between them."""

    objects: list[ContinuitySpace]
    arrows: list[tuple[int, int, SpaceMap]] = field(default_factory=list)


def product_diagram(spaces) -> Diagram:
    return Diagram(list(spaces))


def parallel_diagram(f: SpaceMap, g: SpaceMap) -> Diagram:
    return Diagram([f.source, f.target], [(0, 1, f), (0, 1, g)])


def relation_diagram(space: ContinuitySpace, blocks) -> Diagram:
    """The pair ``R ⇉ S`` whose coequaliser is the quotient by ``blocks``.

    ``R`` is the set of related pairs with the discrete 2-chain structure,
    so both projections are ε-δ continuous.
    """
    cls = blocks_to_assignment(space.points, blocks)
    pairs = [(x, y) for x in space.points for y in space.points if cls[x] == cls[y]]
    ids = [tuple_id(p) for p in pairs]
    R = ContinuitySpace(ids, CHAIN2, {(a, b): "1" for a in ids for b in ids if a != b})
    p1 = SpaceMap(R, space, {i: p[0] for i, p in zip(ids, pairs)})
    p2 = SpaceMap(R, space, {i: p[1] for i, p in zip(ids, pairs)})
    return Diagram([R, space], [(0, 1, p1), (0, 1, p2)])


def equaliser_instance(f: SpaceMap, g: SpaceMap):
    """``(candidate, diagram)`` for the equaliser of ``f`` and ``g``."""
    Z, incl = equaliser(f, g)
    legs = [incl, SpaceMap(Z, f.target, _compose(f.assignment, incl.assignment))]
    return (Z, legs), parallel_diagram(f, g)


def coequaliser_instance(space: ContinuitySpace, blocks, max_functions=DEFAULT_MAX_FUNCTIONS):
    """``(candidate, diagram)`` for the quotient of ``space`` by ``blocks``."""
    diagram = relation_diagram(space, blocks)
    Q, q = coequaliser(space, blocks, max_functions)
    R, p1 = diagram.objects[0], diagram.arrows[0][2]
    legs = [SpaceMap(R, Q, _compose(q.assignment, p1.assignment)), q]
    return (Q, legs), diagram


def _continuous_maps(source, target, max_functions):
    if len(target.points) ** len(source.points) > max_functions:
        raise ProbeTooLarge(f"{len(target.points)}^{len(source.points)} functions exceed {max_functions}")
    out = []
    for a in all_functions(source.points, target.points):
        f = SpaceMap(source, target, a)
        if is_eps_delta_continuous(f):
            out.append(a)
    return out


def _compose(outer: dict, inner: dict) -> dict:
    return {x: outer[y] for x, y in inner.items()}


def _map_ce(f: SpaceMap, expected: bool) -> dict:
    return {"check": "eps_delta_continuous", "expected": expected, "map": io.map_to_json(f)}


def count_limit_mediators(apex, legs: Sequence[SpaceMap], probe, cone: Sequence[dict], max_functions) -> int:
    """Number of ε-δ continuous ``u : probe → apex`` with ``legs[i] ∘ u = cone[i]``."""
    allowed = []
    for z in probe.points:
        allowed.append([p for p in apex.points if all(leg(p) == k[z] for leg, k in zip(legs, cone))])
    total = 1
    for a in allowed:
        total *= len(a)
    if total > max_functions:
        raise ProbeTooLarge(f"{total} candidate mediators exceed {max_functions}")
    count = 0
    for values in cartesian(*allowed):
        if is_eps_delta_continuous(SpaceMap(probe, apex, dict(zip(probe.points, values)))):
            count += 1
    return count


def count_colimit_mediators(apex, legs: Sequence[SpaceMap], probe, cocone: Sequence[dict], max_functions) -> int:
    """Number of ε-δ continuous ``u : apex → probe`` with ``u ∘ legs[i] = cocone[i]``."""
    forced: dict[str, set] = {p: set() for p in apex.points}
    for leg, k in zip(legs, cocone):
        for q in leg.source.points:
            forced[leg(q)].add(k[q])
    allowed = []
    for p in apex.points:
        if len(forced[p]) > 1:
            return 0
        allowed.append(sorted(forced[p]) if forced[p] else list(probe.points))
    total = 1
    for a in allowed:
        total *= len(a)
    if total > max_functions:
        raise ProbeTooLarge(f"{total} candidate mediators exceed {max_functions}")
    count = 0
    for values in cartesian(*allowed):
        if is_eps_delta_continuous(SpaceMap(apex, probe, dict(zip(apex.points, values)))):
            count += 1
    return count


def _cones(diagram: Diagram, probe, max_functions):
    """All cones from ``probe``: continuous maps into each object commuting with the arrows."""
    targets = {t for _, t, _ in diagram.arrows}
    free = [i for i in range(len(diagram.objects)) if i not in targets]
    choices = [_continuous_maps(probe, diagram.objects[i], max_functions) for i in free]
    for combo in cartesian(*choices):
        legs: dict[int, dict] = dict(zip(free, combo))
        ok = True
        changed = True
        while ok and changed:
            changed = False
            for s, t, a in diagram.arrows:
                if s in legs:
                    cand = _compose(a.assignment, legs[s])
                    if t not in legs:
                        legs[t] = cand
                        changed = True
                    elif legs[t] != cand:
                        ok = False
                        break
        if not ok or len(legs) != len(diagram.objects):
            continue
        if all(is_eps_delta_continuous(SpaceMap(probe, diagram.objects[i], legs[i])) for i in legs if i not in free):
            yield [legs[i] for i in range(len(diagram.objects))]


def _cocones(diagram: Diagram, probe, max_functions):
    sources = {s for s, _, _ in diagram.arrows}
    free = [i for i in range(len(diagram.objects)) if i not in sources]
    choices = [_continuous_maps(diagram.objects[i], probe, max_functions) for i in free]
    for combo in cartesian(*choices):
        legs: dict[int, dict] = dict(zip(free, combo))
        ok = True
        changed = True
        while ok and changed:
            changed = False
            for s, t, a in diagram.arrows:
                if t in legs:
                    cand = _compose(legs[t], a.assignment)
                    if s not in legs:
                        legs[s] = cand
                        changed = True
                    elif legs[s] != cand:
                        ok = False
                        break
        if not ok or len(legs) != len(diagram.objects):
            continue
        if all(is_eps_delta_continuous(SpaceMap(diagram.objects[i], probe, legs[i])) for i in legs if i not in free):
            yield [legs[i] for i in range(len(diagram.objects))]


def check_limit(candidate, diagram: Diagram, probes=None, name="limit", max_functions=DEFAULT_MAX_FUNCTIONS) -> VerificationReport:
    apex, legs = candidate
    probes = default_probes() if probes is None else probes
    claim = "limit"
    for leg in legs:
        if not is_eps_delta_continuous(leg):
            return VerificationReport(claim, name, False, _map_ce(leg, True))
    for s, t, a in diagram.arrows:
        if _compose(a.assignment, legs[s].assignment) != legs[t].assignment:
            return VerificationReport(claim, name, False, {"check": "commute", "arrow": [s, t]})
    checked = 0
    for probe in probes:
        for cone in _cones(diagram, probe, max_functions):
            checked += 1
            n = count_limit_mediators(apex, legs, probe, cone, max_functions)
            if n != 1:
                ce = {
                    "check": "limit_mediators",
                    "count": n,
                    "apex": io.space_to_json(apex),
                    "legs": [io.map_to_json(leg) for leg in legs],
                    "probe": io.space_to_json(probe),
                    "cone": cone,
                }
                return VerificationReport(claim, name, False, ce, checked)
    return VerificationReport(claim, name, True, None, checked)


def check_colimit(candidate, diagram: Diagram, probes=None, name="colimit", max_functions=DEFAULT_MAX_FUNCTIONS) -> VerificationReport:
    apex, legs = candidate
    probes = default_probes() if probes is None else probes
    claim = "colimit"
    for leg in legs:
        if not is_eps_delta_continuous(leg):
            return VerificationReport(claim, name, False, _map_ce(leg, True))
    for s, t, a in diagram.arrows:
        if _compose(legs[t].assignment, a.assignment) != legs[s].assignment:
            return VerificationReport(claim, name, False, {"check": "commute", "arrow": [s, t]})
    checked = 0
    for probe in probes:
        for cocone in _cocones(diagram, probe, max_functions):
            checked += 1
            n = count_colimit_mediators(apex, legs, probe, cocone, max_functions)
            if n != 1:
                ce = {
                    "check": "colimit_mediators",
                    "count": n,
                    "apex": io.space_to_json(apex),
                    "legs": [io.map_to_json(leg) for leg in legs],
                    "probe": io.space_to_json(probe),
                    "cocone": cocone,
                }
                return VerificationReport(claim, name, False, ce, checked)
    return VerificationReport(claim, name, True, None, checked)


def check_adjunction(topology: FiniteTopology, probes=None, name="adjunction", max_functions=DEFAULT_MAX_FUNCTIONS) -> VerificationReport:
    """Continuous maps into ``topology`` are exactly the ε-δ maps into its Flagg space."""
    probes = default_probes() if probes is None else probes
    F = flagg(topology)
    checked = 0
    for Y in probes:
        if len(topology.points) ** len(Y.points) > max_functions:
            raise ProbeTooLarge(f"too many functions from a {len(Y.points)}-point probe")
        for g in all_functions(Y.points, topology.points):
            checked += 1
            top = is_top_continuous(SpaceMap(Y.topology, topology, g))
            eps = is_eps_delta_continuous(SpaceMap(Y, F, g))
            if top != eps:
                ce = {
                    "check": "hom_agreement",
                    "topology": io.topology_to_json(topology),
                    "probe": io.space_to_json(Y),
                    "assignment": g,
                    "top_continuous": top,
                    "eps_delta_continuous": eps,
                }
                return VerificationReport("adjunction", name, False, ce, checked)
    return VerificationReport("adjunction", name, True, None, checked)


# -- topological constructions used as oracles ---------------------------


def product_topology(tops: Sequence[FiniteTopology]) -> FiniteTopology:
    """Unions of open rectangles, with points named like :func:`limits.product`."""
    pts = [tuple_id(p) for p in cartesian(*[t.points for t in tops])]
    index = {p: i for i, p in enumerate(sorted(pts))}
    rects = set()
    for opens in cartesian(*[[t.members(o) for o in t.opens] for t in tops]):
        m = 0
        for p in cartesian(*[sorted(o) for o in opens]):
            m |= 1 << index[tuple_id(p)]
        rects.add(m)
    closed = {0}
    for r in rects:
        closed |= {c | r for c in closed}
    return FiniteTopology(pts, closed, _trusted=True)


def sum_topology(tops: Sequence[FiniteTopology]) -> FiniteTopology:
    pts = [tagged(j, x) for j, t in enumerate(tops) for x in t.points]
    opens = []
    for choice in cartesian(*[list(t.opens) for t in tops]):
        opens.append([tagged(j, x) for j, (t, o) in enumerate(zip(tops, choice)) for x in t.members(o)])
    return FiniteTopology(pts, opens)


def quotient_topology(top: FiniteTopology, assignment: dict) -> FiniteTopology:
    classes = sorted(set(assignment.values()))
    opens = []
    for bits in range(1 << len(classes)):
        chosen = {classes[i] for i in iter_bits(bits)}
        pre = [x for x in top.points if assignment[x] in chosen]
        if top.is_open(pre):
            opens.append(sorted(chosen))
    return FiniteTopology(classes, opens)


def check_O_preservation(kind: str, instance, name=None, max_functions=DEFAULT_MAX_FUNCTIONS) -> VerificationReport:
    """Compare the generated topology of a (co)limit with the topological one.

    ``instance`` is a list of spaces for ``product``/``coproduct`` and a
    ``(space, blocks)`` pair for ``coequaliser``.
    """
    name = name or kind
    if kind == "product":
        P, _ = product(instance)
        expected = product_topology([s.topology for s in instance])
        ok = P.topology.is_finer_or_equal(expected)
        relation = "finer_or_equal"
    elif kind == "coproduct":
        C, _ = coproduct(instance)
        expected = sum_topology([s.topology for s in instance])
        ok = C.topology == expected
        relation = "equal"
        P = C
    elif kind == "coequaliser":
        space, blocks = instance
        P, q = coequaliser(space, blocks, max_functions)
        expected = quotient_topology(space.topology, q.assignment)
        ok = P.topology == expected
        relation = "equal"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    ce = None
    if not ok:
        ce = {
            "check": "topology_" + relation,
            "kind": kind,
            "generated": io.topology_to_json(P.topology),
            "expected": io.topology_to_json(expected),
        }
    return VerificationReport(f"O_preserves_{kind}", name, ok, ce, 1, {"relation": relation})


def round_trip_suite(n: int) -> VerificationReport:
    checked = passed = 0
    ce = None
    for T in enumerate_topologies(n):
        checked += 1
        ok = generate_topology(flagg(T)) == T and generate_topology(premetrize(T)) == T
        if ok:
            passed += 1
        elif ce is None:
            ce = {"check": "round_trip", "topology": io.topology_to_json(T)}
    return VerificationReport("round_trip", f"n={n}", ce is None, ce, checked, {"passed": passed})


def balls_open(space: ContinuitySpace) -> bool:
    T = space.topology
    return all(b in T.opens for row in space.basis_balls for b in row)


def continuity_gap_search(source: ContinuitySpace, target: ContinuitySpace, name="gap", max_functions=DEFAULT_MAX_FUNCTIONS) -> VerificationReport:
    """Maps that are topologically continuous but not ε-δ continuous.

    Gaps are expected in general.  The report fails only if an ε-δ map is
    not continuous, or a gap shows up although every target ball is open.
    """
    if len(target.points) ** len(source.points) > max_functions:
        raise ProbeTooLarge("too many functions to enumerate")
    open_balls = balls_open(target)
    gaps = []
    ce = None
    checked = 0
    for a in all_functions(source.points, target.points):
        checked += 1
        f = SpaceMap(source, target, a)
        eps = is_eps_delta_continuous(f)
        top = is_top_continuous(f)
        if eps and not top:
            ce = {"check": "eps_delta_implies_top", "map": io.map_to_json(f)}
            break
        if top and not eps:
            x, e = eps_delta_witness(f)
            gaps.append({"assignment": a, "point": x, "eps": target.lattice.value_to_json(e)})
            if open_balls and ce is None:
                ce = {"check": "no_gap_when_balls_open", "map": io.map_to_json(f)}
    details = {"gaps": gaps, "target_balls_open": open_balls}
    return VerificationReport("continuity_gap", name, ce is None, ce, checked, details)


def replay(report: VerificationReport, max_functions=DEFAULT_MAX_FUNCTIONS) -> bool:
    """Re-run a failing report's counterexample; ``True`` if the failure reproduces."""
    ce = report.counterexample
    if ce is None:
        return False
    check = ce["check"]
    if check == "eps_delta_continuous":
        return is_eps_delta_continuous(io.map_from_json(ce["map"])) != ce["expected"]
    if check == "hom_agreement":
        T = io.topology_from_json(ce["topology"])
        Y = io.space_from_json(ce["probe"])
        g = ce["assignment"]
        return is_top_continuous(SpaceMap(Y.topology, T, g)) != is_eps_delta_continuous(SpaceMap(Y, flagg(T), g))
    if check in ("limit_mediators", "colimit_mediators"):
        apex = io.space_from_json(ce["apex"])
        probe = io.space_from_json(ce["probe"])
        legs = []
        for leg in ce["legs"]:
            m = io.map_from_json(leg)
            if check == "limit_mediators":
                legs.append(SpaceMap(apex, m.target, m.assignment))
            else:
                legs.append(SpaceMap(m.source, apex, m.assignment))
        if check == "limit_mediators":
            n = count_limit_mediators(apex, legs, probe, ce["cone"], max_functions)
        else:
            n = count_colimit_mediators(apex, legs, probe, ce["cocone"], max_functions)
        return n != 1
    if check == "round_trip":
        T = io.topology_from_json(ce["topology"])
        return not (generate_topology(flagg(T)) == T and generate_topology(premetrize(T)) == T)
    if check.startswith("topology_"):
        gen = io.topology_from_json(ce["generated"])
        exp = io.topology_from_json(ce["expected"])
        return not (gen.is_finer_or_equal(exp) if check == "topology_finer_or_equal" else gen == exp)
    if check == "eps_delta_implies_top":
        f = io.map_from_json(ce["map"])
        return is_eps_delta_continuous(f) and not is_top_continuous(f)
    if check == "no_gap_when_balls_open":
        f = io.map_from_json(ce["map"])
        return balls_open(f.target) and is_top_continuous(f) and not is_eps_delta_continuous(f)
    if check == "commute":
        return True
    raise ValueError(f"unknown counterexample kind {check!r}")


# -- mutants ----------------------------------------------------------------


def _rebind(apex: ContinuitySpace, legs: Sequence[SpaceMap], new_apex: ContinuitySpace, outgoing: bool):
    if outgoing:
        return new_apex, [SpaceMap(new_apex, leg.target, leg.assignment) for leg in legs]
    return new_apex, [SpaceMap(leg.source, new_apex, leg.assignment) for leg in legs]


def mutate_all_bottom(candidate, outgoing: bool = True):
    """Coarsen every distance of the apex to bottom; legs keep their assignments."""
    apex, legs = candidate
    L = apex.lattice
    mutant = ContinuitySpace(apex.points, L, {(x, y): L.bottom for x in apex.points for y in apex.points})
    return _rebind(apex, legs, mutant, outgoing)


def mutate_cross_bottom(candidate):
    """Set distances between different coproduct components to bottom."""
    apex, legs = candidate
    L = apex.lattice
    comp = {leg(x): j for j, leg in enumerate(legs) for x in leg.source.points}
    d = {
        (x, y): apex.d[x, y] if comp[x] == comp[y] else L.bottom
        for x in apex.points
        for y in apex.points
    }
    return _rebind(apex, legs, ContinuitySpace(apex.points, L, d), False)


def is_mutant(original, mutant) -> bool:
    a, b = original[0], mutant[0]
    return any(a.d[k] != b.d[k] for k in a.d)
