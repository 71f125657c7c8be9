"""Continuity spaces, finite topologies, and the maps between them.

Ball orientation is center-first: ``B_ε(x) = {y : d(x, y) ≺ ε}``.  A map
``f`` is ε-δ continuous when for every ``x`` and every positive ``ε`` some
positive ``δ`` gives ``f[B_δ(x)] ⊆ B_ε(f x)``.  Both quantifiers run over
the finite ``epsilon_basis`` of each side, which is exact because balls
grow with the radius.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import (
    EpsNotPositive,
    InvalidMap,
    InvalidSpace,
    InvalidTopology,
    NotValueDistributive,
    NTooLarge,
)
from .lattice import EXT_RATIONALS, FiniteLattice, iter_bits
from .omega import OmegaLattice


def set_id(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(members)) + "}"


class ContinuitySpace:
    """Points, a value lattice, and a total distance table with zero diagonal.

    ``d`` may omit diagonal entries; they default to bottom.  Off-diagonal
    entries are all required.
    """

    def __init__(self, points: Iterable[str], lattice, d: Mapping[tuple[str, str], object]):
        points = list(points)
        self.points = tuple(sorted(set(points)))
        if len(self.points) != len(points):
            raise InvalidSpace("duplicate point ids")
        self.lattice = lattice
        if isinstance(lattice, FiniteLattice) and not lattice.is_value_distributive():
            raise NotValueDistributive(f"{lattice!r} is not value distributive")
        table = {}
        known = set(self.points)
        for (x, y), v in d.items():
            if x not in known or y not in known:
                raise InvalidSpace(f"distance ({x!r}, {y!r}) mentions an unknown point")
            if not lattice.contains(v):
                raise InvalidSpace(f"d({x!r}, {y!r}) = {v!r} is not a lattice element")
            table[x, y] = v
        bottom = lattice.bottom
        for x in self.points:
            v = table.setdefault((x, x), bottom)
            if v != bottom:
                raise InvalidSpace(f"d({x!r}, {x!r}) must be bottom, got {v!r}")
            for y in self.points:
                if (x, y) not in table:
                    raise InvalidSpace(f"missing distance d({x!r}, {y!r})")
        self.d = table

    def __repr__(self):
        return f"ContinuitySpace({list(self.points)}, {self.lattice!r})"

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, ContinuitySpace)
            and self.points == other.points
            and self.lattice == other.lattice
            and self.d == other.d
        )

    __hash__ = object.__hash__

    def __len__(self):
        return len(self.points)

    def dist(self, x, y):
        return self.d[x, y]

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def realized(self) -> list:
        seen = {}
        for v in self.d.values():
            seen.setdefault(self.lattice.value_id(v), v)
        return [seen[k] for k in sorted(seen)]

    @cached_property
    def basis(self) -> list:
        return list(self.lattice.epsilon_basis(self.realized))

    def ball_mask(self, i: int, eps) -> int:
        x = self.points[i]
        wa = self.lattice.well_above
        m = 0
        for j, y in enumerate(self.points):
            if wa(eps, self.d[x, y]):
                m |= 1 << j
        return m

    @cached_property
    def basis_balls(self) -> list[list[int]]:
        """``basis_balls[k][i]``: ball around point ``i`` with radius ``basis[k]``."""
        return [[self.ball_mask(i, e) for i in range(len(self.points))] for e in self.basis]

    @cached_property
    def min_balls(self) -> list[int]:
        out = []
        for i in range(len(self.points)):
            balls = [row[i] for row in self.basis_balls]
            smallest = min(balls, key=int.bit_count)
            assert all(smallest & ~b == 0 for b in balls), "basis balls must be nested"
            out.append(smallest)
        return out

    @cached_property
    def topology(self) -> "FiniteTopology":
        return generate_topology(self)

    def mask(self, members: Iterable[str]) -> int:
        idx = self.index
        m = 0
        for p in members:
            m |= 1 << idx[p]
        return m

    def members(self, mask: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in iter_bits(mask))


class FiniteTopology:
    """A topology on a finite point set, stored as bitmasks of open sets."""

    def __init__(self, points: Iterable[str], opens: Iterable, *, _trusted: bool = False):
        self.points = tuple(sorted(set(points)))
        self.index = {p: i for i, p in enumerate(self.points)}
        full = (1 << len(self.points)) - 1
        masks = set()
        for o in opens:
            if isinstance(o, int):
                masks.add(o)
            else:
                m = 0
                for p in o:
                    if p not in self.index:
                        raise InvalidTopology(f"open set mentions unknown point {p!r}")
                    m |= 1 << self.index[p]
                masks.add(m)
        self.opens = frozenset(masks)
        self.full = full
        if not _trusted:
            if 0 not in self.opens or full not in self.opens:
                raise InvalidTopology("a topology must contain the empty set and the whole space")
            ol = list(self.opens)
            for a in ol:
                for b in ol:
                    if a | b not in self.opens or a & b not in self.opens:
                        raise InvalidTopology("opens are not closed under union and intersection")

    @classmethod
    def from_cores(cls, points: Sequence[str], cores: Sequence[int]) -> "FiniteTopology":
        """Alexandrov topology whose minimal neighbourhoods are ``cores``.

        ``cores`` must be indexed by the sorted ``points`` and already be
        closed (``j ∈ cores[i]`` implies ``cores[j] ⊆ cores[i]``).
        """
        opens = {0}
        for c in cores:
            opens |= {o | c for o in opens}
        return cls(points, opens, _trusted=True)

    def __eq__(self, other):
        return isinstance(other, FiniteTopology) and self.points == other.points and self.opens == other.opens

    def __hash__(self):
        return hash((self.points, self.opens))

    def __repr__(self):
        return f"FiniteTopology({self.open_sets()})"

    def __len__(self):
        return len(self.opens)

    def mask(self, members: Iterable[str]) -> int:
        m = 0
        for p in members:
            m |= 1 << self.index[p]
        return m

    def members(self, mask: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in iter_bits(mask))

    def open_sets(self) -> list[list[str]]:
        return sorted((sorted(self.members(o)) for o in self.opens), key=lambda s: (len(s), s))

    def is_open(self, members) -> bool:
        m = members if isinstance(members, int) else self.mask(members)
        return m in self.opens

    @cached_property
    def cores(self) -> list[int]:
        out = []
        for i in range(len(self.points)):
            acc = self.full
            for o in self.opens:
                if o >> i & 1:
                    acc &= o
            out.append(acc)
        return out

    def core(self, x: str) -> frozenset[str]:
        return self.members(self.cores[self.index[x]])

    def interior(self, members) -> frozenset[str]:
        m = members if isinstance(members, int) else self.mask(members)
        best = 0
        for o in self.opens:
            if o & ~m == 0:
                best |= o
        return self.members(best)

    def is_finer_or_equal(self, other: "FiniteTopology") -> bool:
        return self.points == other.points and other.opens <= self.opens

    def specialization(self) -> list[tuple[str, str]]:
        """Pairs ``(x, y)`` with ``y`` in every open containing ``x``, ``x != y``."""
        return [
            (self.points[i], self.points[j])
            for i, c in enumerate(self.cores)
            for j in iter_bits(c)
            if i != j
        ]


class SpaceMap:
    """A total function between the point sets of two spaces or topologies."""

    def __init__(self, source, target, assignment: Mapping[str, str]):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        tp = set(target.points)
        for x in source.points:
            if x not in self.assignment:
                raise InvalidMap(f"map is undefined at {x!r}")
            if self.assignment[x] not in tp:
                raise InvalidMap(f"{x!r} maps to {self.assignment[x]!r}, not a target point")
        extra = set(self.assignment) - set(source.points)
        if extra:
            raise InvalidMap(f"map assigns points outside the source: {sorted(extra)}")

    def __call__(self, x):
        return self.assignment[x]

    def __repr__(self):
        return f"SpaceMap({self.assignment})"

    def __eq__(self, other):
        return isinstance(other, SpaceMap) and self.assignment == other.assignment

    __hash__ = object.__hash__

    def compose(self, first: "SpaceMap") -> "SpaceMap":
        """``self ∘ first``."""
        return SpaceMap(first.source, self.target, {x: self.assignment[first(x)] for x in first.source.points})

    @cached_property
    def index_map(self) -> list[int]:
        tidx = {p: i for i, p in enumerate(self.target.points)}
        return [tidx[self.assignment[x]] for x in self.source.points]


def identity_map(space) -> SpaceMap:
    return SpaceMap(space, space, {x: x for x in space.points})


def image_mask(index_map: Sequence[int], mask: int) -> int:
    m = 0
    for i in iter_bits(mask):
        m |= 1 << index_map[i]
    return m


# -- operations ------------------------------------------------------------


def ball(space: ContinuitySpace, x: str, eps) -> frozenset[str]:
    lattice = space.lattice
    if not lattice.well_above(eps, lattice.bottom):
        raise EpsNotPositive(f"radius {eps!r} is not well above bottom")
    return space.members(space.ball_mask(space.index[x], eps))


def generate_topology(space: ContinuitySpace) -> FiniteTopology:
    """Opens are the sets containing a basis ball around each of their points.

    Balls over the basis are nested, so only the smallest matters and the
    result is the Alexandrov topology of the relation ``y ∈ minball(x)``.
    """
    cores = list(space.min_balls)
    n = len(cores)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = cores[i]
            for j in iter_bits(cores[i]):
                acc |= cores[j]
            if acc != cores[i]:
                cores[i] = acc
                changed = True
    return FiniteTopology.from_cores(space.points, cores)


def eps_delta_witness(f: SpaceMap):
    """``None`` if ``f`` is ε-δ continuous, else ``(x, ε)`` with no admissible δ."""
    src, tgt = f.source, f.target
    im = f.index_map
    src_balls = src.basis_balls
    tgt_balls = tgt.basis_balls
    for i, x in enumerate(src.points):
        fi = im[i]
        for k, eps in enumerate(tgt.basis):
            target_ball = tgt_balls[k][fi]
            if not any(image_mask(im, row[i]) & ~target_ball == 0 for row in src_balls):
                return x, eps
    return None


def is_eps_delta_continuous(f: SpaceMap) -> bool:
    return eps_delta_witness(f) is None


def topology_of(obj) -> FiniteTopology:
    return obj.topology if isinstance(obj, ContinuitySpace) else obj


def is_top_continuous(f: SpaceMap) -> bool:
    """Preimage of every open set is open."""
    st, tt = topology_of(f.source), topology_of(f.target)
    im = f.index_map
    for o in tt.opens:
        pre = 0
        for i, j in enumerate(im):
            if o >> j & 1:
                pre |= 1 << i
        if pre not in st.opens:
            return False
    return True


def flagg(topology: FiniteTopology) -> ContinuitySpace:
    """Flagg's Ω(τ)-valued distance, which regenerates ``topology``.

    ``d(x, y)`` is the family of finite sets of opens that all contain ``y``
    whenever they contain ``x``; it is principal, generated by the set of
    all opens ``U`` with ``x ∈ U ⇒ y ∈ U``.
    """
    opens = sorted(topology.opens)
    open_ids = {o: set_id(topology.members(o)) for o in opens}
    lattice = OmegaLattice(open_ids.values())
    gidx = lattice.ground.index
    d = {}
    for i, x in enumerate(topology.points):
        for j, y in enumerate(topology.points):
            g = 0
            for o in opens:
                if not (o >> i & 1) or (o >> j & 1):
                    g |= 1 << gidx[open_ids[o]]
            d[x, y] = lattice.principal_mask(g)
    return ContinuitySpace(topology.points, lattice, d)


def premetrize(topology: FiniteTopology) -> ContinuitySpace:
    """A [0, ∞]-valued premetric generating ``topology``: 0 inside cores, 1 outside."""
    d = {}
    for i, x in enumerate(topology.points):
        core = topology.cores[i]
        for j, y in enumerate(topology.points):
            d[x, y] = Fraction(0) if core >> j & 1 else Fraction(1)
    return ContinuitySpace(topology.points, EXT_RATIONALS, d)


def enumerate_topologies(n: int, points: Sequence[str] | None = None):
    """Every labeled topology on ``n`` points, via specialization preorders."""
    if n > 4:
        raise NTooLarge(f"enumerate_topologies supports n <= 4, got {n}")
    if points is None:
        points = [str(i) for i in range(n)]
    points = sorted(points)
    if len(points) != n:
        raise ValueError("need exactly n point ids")
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in range(1 << len(off)):
        rel = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(off):
            if bits >> k & 1:
                rel[i] |= 1 << j
        if all(rel[j] & ~rel[i] == 0 for i in range(n) for j in iter_bits(rel[i])):
            yield FiniteTopology.from_cores(points, rel)


def discrete_topology(points: Iterable[str]) -> FiniteTopology:
    points = sorted(points)
    return FiniteTopology.from_cores(points, [1 << i for i in range(len(points))])


def indiscrete_topology(points: Iterable[str]) -> FiniteTopology:
    points = sorted(points)
    full = (1 << len(points)) - 1
    return FiniteTopology(points, {0, full}, _trusted=True)


def all_functions(source_points: Sequence[str], target_points: Sequence[str]):
    for values in product(target_points, repeat=len(source_points)):
        yield dict(zip(source_points, values))
