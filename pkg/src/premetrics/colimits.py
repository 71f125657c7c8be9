"""Final continuity spaces, coproducts, coequalisers, and final lifts.

For ``f : Y → X`` the final structure on ``X`` takes values in ``Ω(M)``
where ``M`` is the set of radius assignments ``h : Y → V_≺``.

Two admission relations are provided.  ``admits`` is the alternating path
relation: ``h`` links ``a`` to ``b`` when ball steps (``x' ∈ B_{h(x)}(x)``)
and glue steps (``f x = f x'``) lead from a point over ``a`` to a point
over ``b``.  Both step kinds allow standing still, so this is ordinary
reachability in the union of the two edge relations.

Chained ball steps do not respect ε-δ continuity when the premetric has no
triangle inequality: with ``d(a, b) = d(b, c) = 0`` and ``d(a, c) = 1`` the
chained quotient along the identity puts ``c`` in every ball around ``a``,
and the identity back into the source is no longer continuous.  The final
space therefore uses ``links`` by default: a single ball step from some
point over ``a`` lands over ``b``.  That is exactly what continuity of
``g ∘ f`` controls, and it yields a genuine final lift.  ``chained=True``
selects the path relation instead.

Admission of a finite ``A ⊆ M`` is a per-element condition either way, so
the distance is the principal family generated by
``H(a, b) = {h : h admits (a, b)}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Mapping, Sequence

from .errors import InvalidMap, PointNotInImage, SizeGuardError
from .lattice import iter_bits
from .omega import DownSetFamily, Ground, OmegaLattice
from .space import ContinuitySpace, SpaceMap, set_id

DEFAULT_MAX_FUNCTIONS = 4096


def tagged(j: int, x: str) -> str:
    return f"{j}:{x}"


@dataclass
class AdmitsInstance:
    """A source space and an assignment of its points into a target set."""

    source: ContinuitySpace
    assignment: Mapping[str, str]

    def __post_init__(self):
        missing = [y for y in self.source.points if y not in self.assignment]
        if missing:
            raise InvalidMap(f"assignment undefined at {missing}")

    @property
    def image(self) -> set[str]:
        return set(self.assignment[y] for y in self.source.points)

    def fibre_mask(self, a: str) -> int:
        m = 0
        for i, y in enumerate(self.source.points):
            if self.assignment[y] == a:
                m |= 1 << i
        return m


class FunctionGround:
    """``M``: every map from the source points into the positive radii."""

    def __init__(self, source: ContinuitySpace, max_functions: int = DEFAULT_MAX_FUNCTIONS):
        self.source = source
        lattice = source.lattice
        self.radii = lattice.positive_representatives(source.realized)
        n = len(source.points)
        size = len(self.radii) ** n
        if size > max_functions:
            raise SizeGuardError(
                f"|M| = {len(self.radii)}^{n} = {size} exceeds the cap of {max_functions}; "
                "shrink the source space or its positive radii"
            )
        rid = [lattice.value_id(r) for r in self.radii]
        keyed = []
        for choice in cartesian(range(len(self.radii)), repeat=n):
            hid = json.dumps([rid[c] for c in choice], separators=(",", ":"), ensure_ascii=False)
            keyed.append((hid, choice))
        keyed.sort()
        self.ids = [k for k, _ in keyed]
        self.choices = [c for _, c in keyed]
        self.ground = Ground(self.ids)
        self.lattice = OmegaLattice(self.ground)
        # ball_masks[i][r]: ball around source point i with radius radii[r]
        self.ball_masks = [[source.ball_mask(i, r) for r in self.radii] for i in range(n)]

    def __len__(self):
        return len(self.ids)

    def function(self, k: int) -> dict:
        return {y: self.radii[c] for y, c in zip(self.source.points, self.choices[k])}

    def index_of(self, h: Mapping[str, object]) -> int:
        lattice = self.source.lattice
        hid = json.dumps([lattice.value_id(h[y]) for y in self.source.points], separators=(",", ":"), ensure_ascii=False)
        return self.ground.index[hid]


def _glue_masks(inst: AdmitsInstance) -> list[int]:
    pts = inst.source.points
    return [inst.fibre_mask(inst.assignment[y]) for y in pts]


def _reach(edges: list[int]) -> list[int]:
    n = len(edges)
    reach = [e | (1 << i) for i, e in enumerate(edges)]
    for k in range(n):
        kb = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & kb:
                reach[i] |= rk
    return reach


def _balls_for(h: Mapping[str, object], inst: AdmitsInstance) -> list[int]:
    src = inst.source
    return [src.ball_mask(i, h[y]) for i, y in enumerate(src.points)]


def admits(h: Mapping[str, object], a: str, b: str, inst: AdmitsInstance) -> bool:
    """Does the radius assignment ``h`` link ``a`` to ``b``?"""
    fa, fb = inst.fibre_mask(a), inst.fibre_mask(b)
    if not fa or not fb:
        raise PointNotInImage(f"{a if not fa else b!r} is not in the image of the assignment")
    for y in inst.source.points:
        if not inst.source.lattice.well_above(h[y], inst.source.lattice.bottom):
            raise ValueError(f"h({y!r}) is not a positive radius")
    edges = [bm | gm for bm, gm in zip(_balls_for(h, inst), _glue_masks(inst))]
    reach = _reach(edges)
    return any(reach[i] & fb for i in iter_bits(fa))


def links(h: Mapping[str, object], a: str, b: str, inst: AdmitsInstance) -> bool:
    """Does one ``h``-ball around a point over ``a`` meet the fibre over ``b``?"""
    fa, fb = inst.fibre_mask(a), inst.fibre_mask(b)
    if not fa or not fb:
        raise PointNotInImage(f"{a if not fa else b!r} is not in the image of the assignment")
    balls = _balls_for(h, inst)
    return any(balls[i] & fb for i in iter_bits(fa))


def admit_table(inst: AdmitsInstance, M: FunctionGround, chained: bool = False) -> dict[tuple[str, str], int]:
    """``H(a, b)`` as a bitmask over ``M`` for every pair of image points."""
    image = sorted(inst.image)
    fibres = {a: inst.fibre_mask(a) for a in image}
    glue = _glue_masks(inst)
    out = {(a, b): 0 for a in image for b in image}
    bit = [1 << M.ground.index[i] for i in M.ids]
    for k, choice in enumerate(M.choices):
        if chained:
            reach = _reach([M.ball_masks[i][c] | glue[i] for i, c in enumerate(choice)])
        else:
            reach = [M.ball_masks[i][c] for i, c in enumerate(choice)]
        for a in image:
            from_a = 0
            for i in iter_bits(fibres[a]):
                from_a |= reach[i]
            for b in image:
                if from_a & fibres[b]:
                    out[a, b] |= bit[k]
    return out


def admit_set(a: str, b: str, inst: AdmitsInstance, M: FunctionGround | None = None, chained: bool = False) -> frozenset[int]:
    """Indices into ``M.ids`` of the radius assignments admitting ``(a, b)``."""
    M = M or FunctionGround(inst.source)
    for p in (a, b):
        if p not in inst.image:
            raise PointNotInImage(f"{p!r} is not in the image of the assignment")
    mask = admit_table(inst, M, chained)[a, b]
    return frozenset(iter_bits(mask))


def final_space(
    inst: AdmitsInstance,
    X: Sequence[str] | None = None,
    max_functions: int = DEFAULT_MAX_FUNCTIONS,
    chained: bool = False,
):
    """The final structure on ``X`` for the assignment, and the map into it."""
    image = inst.image
    X = sorted(set(X) if X is not None else image)
    if not image <= set(X):
        raise InvalidMap("assignment lands outside X")
    M = FunctionGround(inst.source, max_functions)
    H = admit_table(inst, M, chained)
    L = M.lattice
    d = {}
    for x in X:
        for y in X:
            if x == y:
                # d(x, x) = 0 is an axiom, also for points outside the image
                d[x, y] = L.bottom
            elif x in image and y in image:
                d[x, y] = L.principal_mask(H[x, y])
            else:
                d[x, y] = L.top
    space = ContinuitySpace(X, L, d)
    space.function_ground = M
    return space, SpaceMap(inst.source, space, dict(inst.assignment))


class CoproductGround:
    """``N``: the disjoint union of the positive parts of each lattice."""

    def __init__(self, spaces: Sequence[ContinuitySpace]):
        self.lattices = [s.lattice for s in spaces]
        self.positives = [s.lattice.positive_representatives(s.realized) for s in spaces]
        ids = [
            tagged(j, L.value_id(e))
            for j, (L, pos) in enumerate(zip(self.lattices, self.positives))
            for e in pos
        ]
        self.ground = Ground(ids)
        self.lattice = OmegaLattice(self.ground)
        self.component_mask = []
        for j, (L, pos) in enumerate(zip(self.lattices, self.positives)):
            self.component_mask.append(self.ground.mask(tagged(j, L.value_id(e)) for e in pos))

    def bar(self, j: int, eps) -> DownSetFamily:
        """``{{ε}, ∅}`` for a positive ``ε`` of component ``j``."""
        return self.lattice.principal([tagged(j, self.lattices[j].value_id(eps))])

    def phi(self, j: int, a) -> DownSetFamily:
        """``a ↦ [a^↑ ∪ ⊔_{i≠j} (V_i)_≺]^{<ω}`` with ``a^↑ = {ε ≻ ⊥ : ε ≻ a}``."""
        L = self.lattices[j]
        mask = self.ground.full & ~self.component_mask[j]
        mask |= self.ground.mask(tagged(j, L.value_id(e)) for e in self.positives[j] if L.well_above(e, a))
        return self.lattice.principal_mask(mask)


def coproduct(spaces: Sequence[ContinuitySpace]):
    N = CoproductGround(spaces)
    points = [tagged(j, x) for j, s in enumerate(spaces) for x in s.points]
    d = {}
    for j, s in enumerate(spaces):
        for x in s.points:
            for k, t in enumerate(spaces):
                for y in t.points:
                    if j == k:
                        d[tagged(j, x), tagged(k, y)] = N.phi(j, s.d[x, y])
                    else:
                        d[tagged(j, x), tagged(k, y)] = N.lattice.top
    space = ContinuitySpace(points, N.lattice, d)
    space.coproduct_ground = N
    injections = [SpaceMap(s, space, {x: tagged(j, x) for x in s.points}) for j, s in enumerate(spaces)]
    return space, injections


def blocks_to_assignment(points: Sequence[str], blocks: Sequence[Sequence[str]]) -> dict[str, str]:
    """Class ids for a partition given as blocks; unlisted points are singletons."""
    known = set(points)
    seen: set[str] = set()
    assignment = {}
    for block in blocks:
        block = list(block)
        for p in block:
            if p not in known:
                raise InvalidMap(f"relation mentions unknown point {p!r}")
            if p in seen:
                raise InvalidMap(f"point {p!r} occurs in two blocks")
            seen.add(p)
        cid = set_id(block)
        for p in block:
            assignment[p] = cid
    for p in points:
        if p not in assignment:
            assignment[p] = set_id([p])
    return assignment


def coequaliser(space: ContinuitySpace, blocks: Sequence[Sequence[str]], max_functions: int = DEFAULT_MAX_FUNCTIONS, chained: bool = False):
    assignment = blocks_to_assignment(space.points, blocks)
    return final_space(AdmitsInstance(space, assignment), None, max_functions, chained)


def final_lift(
    cocone: Sequence[tuple[ContinuitySpace, Mapping[str, str]]],
    X: Sequence[str],
    max_functions: int = DEFAULT_MAX_FUNCTIONS,
    chained: bool = False,
):
    """Coproduct of the sources, then the final structure along the induced map."""
    sources = [s for s, _ in cocone]
    Y, injections = coproduct(sources)
    induced = {tagged(j, y): a[y] for j, (s, a) in enumerate(cocone) for y in s.points}
    space, _ = final_space(AdmitsInstance(Y, induced), X, max_functions, chained)
    legs = [SpaceMap(s, space, {y: a[y] for y in s.points}) for s, a in cocone]
    return space, legs
