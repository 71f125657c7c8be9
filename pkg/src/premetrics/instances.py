"""Named lattices, spaces and topologies used by tests, probes and the CLI."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .lattice import EXT_RATIONALS, chain, validate_lattice
from .space import ContinuitySpace, FiniteTopology

CHAIN2 = chain(["0", "1"])
CHAIN3 = chain(["0", "m", "1"])


def diamond():
    return validate_lattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


def m3():
    atoms = ["a", "b", "c"]
    return validate_lattice(["0", *atoms, "1"], [("0", x) for x in atoms] + [(x, "1") for x in atoms])


def n5():
    return validate_lattice(["0", "a", "b", "c", "1"], [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")])


def space(points, lattice, table):
    """A space from an off-diagonal table ``{(x, y): value}``."""
    return ContinuitySpace(points, lattice, dict(table))


def counterexample_space() -> ContinuitySpace:
    """Four points where 0-distances link a-b and b-c only; a-c is 2, the rest 1."""
    pts = "abcd"
    d = {}
    for x in pts:
        for y in pts:
            if x == y:
                continue
            pair = {x, y}
            if pair in ({"a", "b"}, {"b", "c"}):
                d[x, y] = Fraction(0)
            elif pair == {"a", "c"}:
                d[x, y] = Fraction(2)
            else:
                d[x, y] = Fraction(1)
    return ContinuitySpace(pts, EXT_RATIONALS, d)


def sierpinski() -> FiniteTopology:
    return FiniteTopology(["x", "y"], [[], ["x"], ["x", "y"]])


def all_spaces(points, lattice):
    """Every space on ``points`` over a finite ``lattice``."""
    points = sorted(points)
    pairs = [(x, y) for x in points for y in points if x != y]
    for values in product(lattice.elements, repeat=len(pairs)):
        yield ContinuitySpace(points, lattice, dict(zip(pairs, values)))


def default_probes() -> list[ContinuitySpace]:
    """All spaces on at most two points over the 2- and 3-chain, plus the 4-point premetric."""
    probes = []
    for lattice in (CHAIN2, CHAIN3):
        probes.extend(all_spaces(["p"], lattice))
        probes.extend(all_spaces(["p", "q"], lattice))
    probes.append(counterexample_space())
    return probes


def suite_spaces() -> list[ContinuitySpace]:
    """A fixed family of small chain-valued spaces for universal-property runs."""
    c2, c3 = CHAIN2, CHAIN3
    return [
        space(["p"], c2, {}),
        space(["p", "q"], c2, {("p", "q"): "1", ("q", "p"): "1"}),
        space(["p", "q"], c2, {("p", "q"): "0", ("q", "p"): "0"}),
        space(["p", "q"], c2, {("p", "q"): "0", ("q", "p"): "1"}),
        space(["p", "q"], c3, {("p", "q"): "m", ("q", "p"): "0"}),
        space(
            ["a", "b", "c"],
            c3,
            {
                ("a", "b"): "0", ("b", "a"): "0", ("b", "c"): "0", ("c", "b"): "0",
                ("a", "c"): "1", ("c", "a"): "1",
            },
        ),
        space(
            ["a", "b", "c"],
            c2,
            {
                ("a", "b"): "0", ("b", "a"): "1", ("a", "c"): "1", ("c", "a"): "1",
                ("b", "c"): "1", ("c", "b"): "0",
            },
        ),
        space(
            ["a", "b", "c"],
            c3,
            {(x, y): "m" for x in "abc" for y in "abc" if x != y},
        ),
    ]
