"""Initial lifts of cones, products, and equalisers of continuity spaces.

The apex of a lifted cone carries values in ``Ω(U)`` where ``U`` is the
product of the positive parts of the leg lattices.  A tuple of leg
distances ``x`` is sent to the principal family generated by
``x^↑ = {a ∈ U : a_j ≻ x_j for all j}``.  Index sets are finite, so the
finite-support product coincides with the full product.

For lattices whose positive part is infinite (the rationals) or huge, each
coordinate uses ``positive_representatives``: one radius per distinct ball
shape over the distances that leg actually realizes.  Balls, and hence
every continuity question, are unchanged by that restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Mapping, Sequence

from .errors import InvalidMap, SizeGuardError
from .omega import DownSetFamily, Ground, OmegaLattice
from .space import ContinuitySpace, SpaceMap

DEFAULT_MAX_GROUND = 10**6


def tuple_id(parts: Sequence[str]) -> str:
    return "(" + ",".join(parts) + ")"


@dataclass
class Cone:
    apex: Sequence[str]
    legs: list[tuple[Mapping[str, str], ContinuitySpace]] = field(default_factory=list)

    def __post_init__(self):
        self.apex = tuple(sorted(self.apex))
        for assignment, target in self.legs:
            tp = set(target.points)
            for x in self.apex:
                if assignment.get(x) not in tp:
                    raise InvalidMap(f"cone leg undefined or off-target at {x!r}")


class ProductGround:
    """``U``: tuples of positives, one coordinate per lattice."""

    def __init__(self, lattices: Sequence, realized: Sequence[Sequence] | None = None, max_ground: int = DEFAULT_MAX_GROUND):
        self.lattices = list(lattices)
        if realized is None:
            realized = [()] * len(self.lattices)
        self.coordinates = [L.positive_representatives(r) for L, r in zip(self.lattices, realized)]
        size = 1
        for c in self.coordinates:
            size *= len(c)
        if size > max_ground:
            raise SizeGuardError(f"product ground would have {size} elements (cap {max_ground})")
        self.tuples = list(cartesian(*self.coordinates))
        ids = [self.tuple_id(t) for t in self.tuples]
        self.ground = Ground(ids)
        self.bit = [1 << self.ground.index[i] for i in ids]
        self.lattice = OmegaLattice(self.ground)

    def __len__(self):
        return len(self.tuples)

    def tuple_id(self, t) -> str:
        return tuple_id([L.value_id(v) for L, v in zip(self.lattices, t)])

    def up_mask(self, x: Sequence) -> int:
        """Bitmask of ``x^↑``.  Filtering coordinate-wise keeps this linear in |U|."""
        ok = [
            [L.well_above(a, xj) for a in coords]
            for L, coords, xj in zip(self.lattices, self.coordinates, x)
        ]
        sizes = [len(c) for c in self.coordinates]
        mask = 0
        for k, idxs in enumerate(cartesian(*[range(s) for s in sizes])):
            if all(ok[j][i] for j, i in enumerate(idxs)):
                mask |= self.bit[k]
        return mask

    def phi(self, x: Sequence) -> DownSetFamily:
        return self.lattice.principal_mask(self.up_mask(x))


def positives_product_ground(lattices: Sequence, realized=None, max_ground: int = DEFAULT_MAX_GROUND) -> ProductGround:
    return ProductGround(lattices, realized, max_ground)


def phi_embed(x: Sequence, U: ProductGround) -> DownSetFamily:
    return U.phi(x)


def pullback_premetric(assignment: Mapping[str, str], target: ContinuitySpace, apex: Sequence[str] | None = None) -> ContinuitySpace:
    points = sorted(apex if apex is not None else assignment)
    d = {(x, y): target.d[assignment[x], assignment[y]] for x in points for y in points}
    return ContinuitySpace(points, target.lattice, d)


def initial_lift(cone: Cone, max_ground: int = DEFAULT_MAX_GROUND):
    """The initial continuity structure on the cone apex, with its legs."""
    targets = [t for _, t in cone.legs]
    U = ProductGround([t.lattice for t in targets], [t.realized for t in targets], max_ground)
    d = {}
    for x in cone.apex:
        for y in cone.apex:
            coords = [t.d[a[x], a[y]] for a, t in cone.legs]
            d[x, y] = U.phi(coords)
    space = ContinuitySpace(cone.apex, U.lattice, d)
    space.product_ground = U
    legs = [SpaceMap(space, t, {x: a[x] for x in cone.apex}) for a, t in cone.legs]
    return space, legs


def product(spaces: Sequence[ContinuitySpace], max_ground: int = DEFAULT_MAX_GROUND):
    points = {tuple_id(p): p for p in cartesian(*[s.points for s in spaces])}
    legs = [({pid: p[j] for pid, p in points.items()}, s) for j, s in enumerate(spaces)]
    return initial_lift(Cone(list(points), legs), max_ground)


def equaliser(f: SpaceMap, g: SpaceMap):
    if f.source != g.source or f.target != g.target:
        raise InvalidMap("equaliser needs parallel maps")
    X = f.source
    Z = [x for x in X.points if f(x) == g(x)]
    space = ContinuitySpace(Z, X.lattice, {(x, y): X.d[x, y] for x in Z for y in Z})
    return space, SpaceMap(space, X, {z: z for z in Z})
