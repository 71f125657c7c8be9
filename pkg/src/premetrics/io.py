"""JSON and DOT formats for lattices, spaces, topologies and maps.

Output is canonical: sorted keys, points in id order, Ω values as sorted
generator lists.  Identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import PremetricError
from .lattice import EXT_RATIONALS, FiniteLattice, validate_lattice
from .limits import Cone
from .omega import OmegaLattice
from .space import ContinuitySpace, FiniteTopology, SpaceMap


class InputError(PremetricError):
    """Malformed input, with the file and field that caused it."""

    def __init__(self, message, path=None, field=None):
        super().__init__(message)
        self.path = path
        self.field = field

    def to_json(self) -> dict:
        return {"error": str(self), "file": self.path, "field": self.field}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} at line {exc.lineno}", str(path)) from None


def _need(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"missing field {key!r}", field=f"{where}.{key}" if where else key)
    return obj[key]


# -- lattices -------------------------------------------------------------


def lattice_from_json(obj, where="lattice"):
    kind = _need(obj, "kind", where)
    if kind == "finite":
        return validate_lattice(_need(obj, "elements", where), [tuple(p) for p in _need(obj, "leq", where)])
    if kind == "ext_rationals":
        return EXT_RATIONALS
    if kind == "omega":
        return OmegaLattice(_need(obj, "ground", where))
    raise InputError(f"unknown lattice kind {kind!r}", field=f"{where}.kind")


def lattice_to_json(lattice) -> dict:
    return lattice.to_json()


# -- spaces and topologies ------------------------------------------------


def space_from_json(obj, where="space") -> ContinuitySpace:
    points = _need(obj, "points", where)
    lattice = lattice_from_json(_need(obj, "lattice", where), f"{where}.lattice")
    d = {}
    for k, entry in enumerate(_need(obj, "d", where)):
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError("distance entries are [x, y, value]", field=f"{where}.d[{k}]")
        x, y, v = entry
        try:
            d[x, y] = lattice.value_from_json(v)
        except PremetricError as exc:
            raise InputError(str(exc), field=f"{where}.d[{k}]") from None
    return ContinuitySpace(points, lattice, d)


def space_to_json(space: ContinuitySpace) -> dict:
    L = space.lattice
    d = [
        [x, y, L.value_to_json(space.d[x, y])]
        for x in space.points
        for y in space.points
        if x != y
    ]
    return {"points": list(space.points), "lattice": L.to_json(), "d": d}


def topology_from_json(obj, where="topology") -> FiniteTopology:
    return FiniteTopology(_need(obj, "points", where), _need(obj, "opens", where))


def topology_to_json(top: FiniteTopology) -> dict:
    return {"points": list(top.points), "opens": top.open_sets()}


def structure_from_json(obj, where):
    if isinstance(obj, dict) and "opens" in obj:
        return topology_from_json(obj, where)
    return space_from_json(obj, where)


def structure_to_json(obj) -> dict:
    return topology_to_json(obj) if isinstance(obj, FiniteTopology) else space_to_json(obj)


def map_from_json(obj, where="map") -> SpaceMap:
    src = structure_from_json(_need(obj, "source", where), f"{where}.source")
    tgt = structure_from_json(_need(obj, "target", where), f"{where}.target")
    return SpaceMap(src, tgt, _need(obj, "assignment", where))


def map_to_json(f: SpaceMap) -> dict:
    return {
        "source": structure_to_json(f.source),
        "target": structure_to_json(f.target),
        "assignment": {x: f.assignment[x] for x in f.source.points},
    }


def cone_from_json(obj, where="cone") -> Cone:
    legs = []
    for k, leg in enumerate(_need(obj, "legs", where)):
        w = f"{where}.legs[{k}]"
        legs.append((_need(leg, "assignment", w), space_from_json(_need(leg, "target", w), f"{w}.target")))
    return Cone(_need(obj, "apex", where), legs)


def cocone_from_json(obj, where="cocone"):
    legs = []
    for k, leg in enumerate(_need(obj, "legs", where)):
        w = f"{where}.legs[{k}]"
        legs.append((space_from_json(_need(leg, "source", w), f"{w}.source"), _need(leg, "assignment", w)))
    return legs, _need(obj, "apex", where)


def relation_from_json(obj, where="relation") -> list[list[str]]:
    if not isinstance(obj, list) or not all(isinstance(b, list) for b in obj):
        raise InputError("a relation is a list of point-id blocks", field=where)
    return obj


# -- DOT ------------------------------------------------------------------


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def lattice_to_dot(lattice: FiniteLattice) -> str:
    lines = ["digraph lattice {", "  rankdir=BT;"]
    lines += [f"  {_q(e)};" for e in lattice.elements]
    lines += [f"  {_q(a)} -> {_q(b)};" for a, b in lattice.covers()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def topology_to_dot(top: FiniteTopology) -> str:
    """Specialization order: an edge ``x -> y`` when ``y`` lies in every open around ``x``."""
    rel = set(top.specialization())
    edges = []
    for x, y in sorted(rel):
        # skip edges implied by a strictly intermediate point
        if any((x, z) in rel and (z, y) in rel and (z, x) not in rel and (y, z) not in rel for z in top.points if z not in (x, y)):
            continue
        edges.append((x, y))
    lines = ["digraph specialization {"]
    lines += [f"  {_q(p)};" for p in top.points]
    lines += [f"  {_q(a)} -> {_q(b)};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
