"""Down-closed families of subsets of a finite ground, ordered by reverse inclusion.

A family is stored as the antichain of its maximal members, each member a
bitmask over the lexicographically sorted ground.  Meet is union of
families, join is intersection; the empty family is top and the full power
set is bottom.

Well-above rule (derived, checked against the generic lattice algorithm on
materialized lattices in the test suite): for ``q`` other than top,
``q ≻ p`` iff the union ``G_q`` of q's generators is itself a member of
``p``.  The covering ``{down(F) : F ∈ p}`` has meet ``p``, so some member
must contain ``q``, i.e. ``G_q ⊆ F ∈ p``; conversely any ``S`` whose union
covers ``p`` contains ``G_q`` in one of its families.  Top is well above
everything (see the convention in :mod:`premetrics.lattice`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import GroundMismatch, GroundTooLarge, IdNotInGround, ElementNotInLattice
from .lattice import FiniteLattice, iter_bits, validate_lattice


class Ground:
    """A finite, canonically ordered set of ids."""

    __slots__ = ("ids", "index", "full", "_hash")

    def __init__(self, ids: Iterable[str]):
        self.ids = tuple(sorted(set(ids)))
        self.index = {g: i for i, g in enumerate(self.ids)}
        self.full = (1 << len(self.ids)) - 1
        self._hash = hash(self.ids)

    def __len__(self):
        return len(self.ids)

    def __eq__(self, other):
        return self is other or (isinstance(other, Ground) and self._hash == other._hash and self.ids == other.ids)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Ground({list(self.ids)})"

    def mask(self, members: Iterable[str]) -> int:
        m = 0
        for g in members:
            try:
                m |= 1 << self.index[g]
            except KeyError:
                raise IdNotInGround(f"{g!r} is not in the ground set") from None
        return m

    def members(self, mask: int) -> list[str]:
        return [self.ids[i] for i in iter_bits(mask)]


def as_ground(ground) -> Ground:
    return ground if isinstance(ground, Ground) else Ground(ground)


def _antichain(masks: Iterable[int]) -> tuple[int, ...]:
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda m: -m.bit_count()):
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class DownSetFamily:
    ground: Ground
    generators: tuple[int, ...]

    def __repr__(self):
        return f"DownSetFamily({self.to_json()})"

    @property
    def is_top(self) -> bool:
        return not self.generators

    def union_mask(self) -> int:
        acc = 0
        for g in self.generators:
            acc |= g
        return acc

    def has_member(self, mask: int) -> bool:
        return any(mask & ~g == 0 for g in self.generators)

    def __contains__(self, subset) -> bool:
        return self.has_member(self.ground.mask(subset))

    def to_json(self) -> list[list[str]]:
        return sorted(self.ground.members(g) for g in self.generators)


def from_masks(ground: Ground, masks: Iterable[int]) -> DownSetFamily:
    return DownSetFamily(ground, _antichain(masks))


def normalize(ground, subsets: Iterable[Iterable[str]]) -> DownSetFamily:
    """The down-closed family generated by ``subsets``."""
    ground = as_ground(ground)
    return from_masks(ground, (ground.mask(s) for s in subsets))


def principal(ground, subset: Iterable[str]) -> DownSetFamily:
    """All subsets of ``subset``."""
    ground = as_ground(ground)
    return DownSetFamily(ground, (ground.mask(subset),))


def _same_ground(p: DownSetFamily, q: DownSetFamily):
    if p.ground != q.ground:
        raise GroundMismatch("families live over different ground sets")


def leq(p: DownSetFamily, q: DownSetFamily) -> bool:
    _same_ground(p, q)
    return all(any(g & ~h == 0 for h in p.generators) for g in q.generators)


def meet(families: Sequence[DownSetFamily], ground=None) -> DownSetFamily:
    families = list(families)
    if not families:
        return DownSetFamily(as_ground(ground), ())
    for q in families[1:]:
        _same_ground(families[0], q)
    return from_masks(families[0].ground, (g for p in families for g in p.generators))


def join(families: Sequence[DownSetFamily], ground=None) -> DownSetFamily:
    families = list(families)
    if not families:
        g = as_ground(ground)
        return DownSetFamily(g, (g.full,))
    for q in families[1:]:
        _same_ground(families[0], q)
    acc = families[0].generators
    for p in families[1:]:
        acc = _antichain(a & b for a in acc for b in p.generators)
    return DownSetFamily(families[0].ground, acc)


def well_above_omega(q: DownSetFamily, p: DownSetFamily) -> bool:
    _same_ground(p, q)
    if q.is_top:
        return True
    return p.has_member(q.union_mask())


class OmegaLattice:
    """Value-lattice handle for the down-set families over a finite ground."""

    kind = "omega"

    def __init__(self, ground):
        self.ground = as_ground(ground)
        self.bottom = DownSetFamily(self.ground, (self.ground.full,))
        self.top = DownSetFamily(self.ground, ())

    def __eq__(self, other):
        return isinstance(other, OmegaLattice) and self.ground == other.ground

    def __hash__(self):
        return hash(("omega", self.ground))

    def __repr__(self):
        return f"OmegaLattice(|ground|={len(self.ground)})"

    def contains(self, v) -> bool:
        return isinstance(v, DownSetFamily) and v.ground == self.ground

    def _check(self, v):
        if not self.contains(v):
            raise ElementNotInLattice(f"{v!r} is not a family over this ground")
        return v

    def leq(self, a, b) -> bool:
        return leq(self._check(a), self._check(b))

    def meet(self, values: Iterable):
        return meet([self._check(v) for v in values], self.ground)

    def join(self, values: Iterable):
        return join([self._check(v) for v in values], self.ground)

    def well_above(self, y, x) -> bool:
        return well_above_omega(self._check(y), self._check(x))

    def principal(self, subset: Iterable[str]) -> DownSetFamily:
        return principal(self.ground, subset)

    def principal_mask(self, mask: int) -> DownSetFamily:
        return DownSetFamily(self.ground, (mask,))

    def epsilon_basis(self, realized: Iterable = ()) -> list:
        # bottom ≻ bottom over a finite ground: the ground itself is a member
        return [self.bottom]

    def positive_representatives(self, realized: Iterable = ()) -> list:
        """Finitely many positives, one per distinct behaviour on ``realized``.

        Every element is well above bottom here, so ``V_≺`` is the whole
        lattice.  An element ``e`` other than top acts on a distance ``δ``
        only through ``G_e ∈ δ``; the sets ``G`` worth trying are the
        intersections of generators of realized distances (plus the ground),
        and ``principal(G)`` realizes each one.
        """
        realized = sorted({self._check(v) for v in realized}, key=self.value_id)
        closure = {self.ground.full}
        frontier = {g for v in realized for g in v.generators}
        while frontier:
            closure |= frontier
            frontier = {a & b for a in closure for b in closure} - closure
        seen = {}
        candidates = [self.top] + [self.principal_mask(g) for g in sorted(closure, key=lambda g: (-g.bit_count(), g))]
        for c in candidates:
            sig = tuple(self.well_above(c, v) for v in realized)
            seen.setdefault(sig, c)
        return list(seen.values())

    def is_value_distributive(self) -> bool:
        return True

    def value_id(self, v) -> str:
        return json.dumps(self._check(v).to_json(), separators=(",", ":"), ensure_ascii=False)

    def value_to_json(self, v):
        return self._check(v).to_json()

    def value_from_json(self, obj):
        if not isinstance(obj, list) or not all(isinstance(s, list) for s in obj):
            raise ElementNotInLattice(f"expected a list of generator lists, got {obj!r}")
        return normalize(self.ground, obj)

    def to_json(self) -> dict:
        return {"kind": "omega", "ground": list(self.ground.ids)}


def all_families(ground) -> list[DownSetFamily]:
    """Every down-closed family over ``ground``, by backtracking over subsets."""
    ground = as_ground(ground)
    n = len(ground)
    subsets = sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
    out = []

    def rec(k, chosen):
        if k == len(subsets):
            out.append(from_masks(ground, chosen))
            return
        s = subsets[k]
        rec(k + 1, chosen)
        if all((s & ~(1 << i)) in chosen for i in iter_bits(s)):
            chosen.add(s)
            rec(k + 1, chosen)
            chosen.discard(s)

    rec(0, set())
    return out


def materialize(ground, max_size: int = 4) -> tuple[FiniteLattice, dict]:
    """The explicit finite lattice ``Ω(ground)`` plus an id -> family map."""
    ground = as_ground(ground)
    if len(ground) > max_size:
        raise GroundTooLarge(f"materialize supports |ground| <= {max_size}, got {len(ground)}")
    handle = OmegaLattice(ground)
    fams = all_families(ground)
    ids = {handle.value_id(p): p for p in fams}
    pairs = [(a, b) for a, p in ids.items() for b, q in ids.items() if leq(p, q)]
    return validate_lattice(ids, pairs), ids


def literal_family(p: DownSetFamily) -> frozenset[int]:
    """Every member of ``p`` as a bitmask; exponential, for tests."""
    out = set()
    for g in p.generators:
        bits = list(iter_bits(g))
        for r in range(len(bits) + 1):
            for combo in combinations(bits, r):
                out.add(sum(1 << b for b in combo))
    return frozenset(out)
