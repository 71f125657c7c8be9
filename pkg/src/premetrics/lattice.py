"""Bounded lattices behind a uniform value-lattice contract.

Every lattice kind answers ``leq``, ``meet``, ``join``, ``bottom``, ``top``,
``well_above`` and ``epsilon_basis``.  Two kinds live here: explicit finite
lattices and the extended non-negative rationals.  The third kind, the
down-set lattice over a finite ground, lives in :mod:`premetrics.omega`.

Well-above convention: ``y ≻ x`` holds when every *nonempty* ``S`` with
``⋀S ≤ x`` has a member ``s ≤ y``.  Quantifying over nonempty ``S`` only
differs from the all-subsets reading at ``x = top``: it makes ``top ≻ top``.
Without it, ``x ↦ {a : a ≻ x}`` would collapse every tuple with a top
coordinate in a product of chains, and that map has to be injective.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Protocol, Sequence

from .errors import (
    ElementNotInLattice,
    NotALattice,
    NotAPartialOrder,
    NotValueDistributive,
    PremetricError,
)


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ValueLattice(Protocol):
    kind: str

    @property
    def bottom(self): ...

    @property
    def top(self): ...

    def contains(self, v) -> bool: ...

    def leq(self, a, b) -> bool: ...

    def meet(self, values: Iterable): ...

    def join(self, values: Iterable): ...

    def well_above(self, y, x) -> bool: ...

    def epsilon_basis(self, realized: Iterable) -> list: ...

    def positive_representatives(self, realized: Iterable) -> list: ...

    def is_value_distributive(self) -> bool: ...

    def value_id(self, v) -> str: ...

    def value_to_json(self, v): ...

    def value_from_json(self, obj): ...

    def to_json(self) -> dict: ...


class FiniteLattice:
    """An explicit finite bounded lattice over string element ids.

    Build instances with :func:`validate_lattice`; the constructor trusts its
    input.  Elements are kept in lexicographic order and the order relation
    is stored as one up-set bitmask per element.
    """

    kind = "finite"

    def __init__(self, elements: Sequence[str], up: Sequence[int], meet_table, join_table):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._up = tuple(up)
        n = len(self.elements)
        down = [0] * n
        for i, mask in enumerate(self._up):
            for j in iter_bits(mask):
                down[j] |= 1 << i
        self._down = tuple(down)
        self._meet = meet_table
        self._join = join_table
        full = (1 << n) - 1
        self._bottom = next(i for i in range(n) if self._up[i] == full)
        self._top = next(i for i in range(n) if self._down[i] == full)
        # ⋀{s : s ≰ y} per y; the minimum of the meet-closure of that set,
        # so y ≻ x iff the set is empty or this meet is not below x.
        self._complement_meet = []
        for y in range(n):
            rest = full & ~self._down[y]
            self._complement_meet.append(self._meet_mask(rest) if rest else None)
        self._vd_cache = None

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FiniteLattice)
            and self.elements == other.elements
            and self._up == other._up
        )

    def __hash__(self):
        return hash((self.elements, self._up))

    def __repr__(self):
        return f"FiniteLattice({list(self.elements)})"

    # -- basic structure -------------------------------------------------

    @property
    def bottom(self) -> str:
        return self.elements[self._bottom]

    @property
    def top(self) -> str:
        return self.elements[self._top]

    def _idx(self, v) -> int:
        try:
            return self.index[v]
        except (KeyError, TypeError):
            raise ElementNotInLattice(f"{v!r} is not an element of {self!r}") from None

    def contains(self, v) -> bool:
        return isinstance(v, str) and v in self.index

    def leq(self, a, b) -> bool:
        return bool(self._up[self._idx(a)] >> self._idx(b) & 1)

    def _meet_mask(self, mask: int) -> int:
        acc = self._top
        for i in iter_bits(mask):
            acc = self._meet[acc][i]
        return acc

    def meet(self, values: Iterable) -> str:
        acc = self._top
        for v in values:
            acc = self._meet[acc][self._idx(v)]
        return self.elements[acc]

    def join(self, values: Iterable) -> str:
        acc = self._bottom
        for v in values:
            acc = self._join[acc][self._idx(v)]
        return self.elements[acc]

    def up_set(self, v) -> list[str]:
        return [self.elements[i] for i in iter_bits(self._up[self._idx(v)])]

    def down_set(self, v) -> list[str]:
        return [self.elements[i] for i in iter_bits(self._down[self._idx(v)])]

    def covers(self) -> list[tuple[str, str]]:
        """Hasse diagram edges ``(lower, upper)`` in canonical order."""
        edges = []
        for i in range(len(self.elements)):
            strict = self._up[i] & ~(1 << i)
            for j in iter_bits(strict):
                between = strict & self._down[j] & ~(1 << j)
                if not between:
                    edges.append((self.elements[i], self.elements[j]))
        return sorted(edges)

    # -- well-above and distributivity -----------------------------------

    def well_above(self, y, x) -> bool:
        yi, xi = self._idx(y), self._idx(x)
        m = self._complement_meet[yi]
        if m is None:
            return True
        return not (self._up[m] >> xi & 1)

    def well_above_set(self, x) -> list[str]:
        return [y for y in self.elements if self.well_above(y, x)]

    def positives(self) -> list[str]:
        """``V_≺``: the elements well above bottom."""
        return self.well_above_set(self.bottom)

    def is_completely_distributive(self) -> bool:
        return all(self.meet(self.well_above_set(y)) == y for y in self.elements)

    def value_distributivity_witness(self):
        """``None`` if value distributive, else a dict describing the failure."""
        if self._vd_cache is not None:
            return self._vd_cache[1]
        witness = None
        for y in self.elements:
            above = self.well_above_set(y)
            if self.meet(above) != y:
                witness = {"reason": "not completely distributive", "element": y, "well_above": above}
                break
        if witness is None:
            pos = self.positives()
            pos_set = set(pos)
            if not pos:
                witness = {"reason": "no element is well above bottom"}
            for a in pos:
                if witness:
                    break
                for b in self.up_set(a):
                    if b not in pos_set:
                        witness = {"reason": "not upward closed", "pair": [a, b]}
                        break
            for i, a in enumerate(pos):
                if witness:
                    break
                for b in pos[i + 1:]:
                    m = self.meet([a, b])
                    if m not in pos_set:
                        witness = {"reason": "not closed under meet", "pair": [a, b], "meet": m}
                        break
        self._vd_cache = (witness is None, witness)
        return witness

    def is_value_distributive(self) -> bool:
        return self.value_distributivity_witness() is None

    def epsilon_basis(self, realized: Iterable = ()) -> list[str]:
        if not self.is_value_distributive():
            raise NotValueDistributive(f"{self!r} is not value distributive")
        return [self.meet(self.positives())]

    def positive_representatives(self, realized: Iterable = ()) -> list[str]:
        if not self.is_value_distributive():
            raise NotValueDistributive(f"{self!r} is not value distributive")
        return self.positives()

    # -- serialization ---------------------------------------------------

    def value_id(self, v) -> str:
        self._idx(v)
        return v

    def value_to_json(self, v):
        return self.value_id(v)

    def value_from_json(self, obj):
        self._idx(obj)
        return obj

    def to_json(self) -> dict:
        return {"kind": "finite", "elements": list(self.elements), "leq": [list(e) for e in self.covers()]}


def validate_lattice(elements: Iterable[str], leq_pairs: Iterable[Sequence[str]]) -> FiniteLattice:
    """Close ``leq_pairs`` reflexively and transitively and check the result is a lattice."""
    elements = sorted(set(elements))
    if not elements:
        raise NotALattice("a lattice needs at least one element")
    if not all(isinstance(e, str) for e in elements):
        raise PremetricError("lattice element ids must be strings")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    up = [1 << i for i in range(n)]
    for pair in leq_pairs:
        lo, hi = pair
        for e in (lo, hi):
            if e not in index:
                raise ElementNotInLattice(f"{e!r} appears in leq but is not a declared element")
        up[index[lo]] |= 1 << index[hi]
    for k in range(n):
        kb = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & kb:
                up[i] |= uk
    for i in range(n):
        for j in iter_bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise NotAPartialOrder(f"cycle between {elements[i]!r} and {elements[j]!r}")
    down = [0] * n
    for i in range(n):
        for j in iter_bits(up[i]):
            down[j] |= 1 << i
    pop = [m.bit_count() for m in down]
    pop_up = [m.bit_count() for m in up]

    def bound(common, sets, sizes):
        best = None
        for c in iter_bits(common):
            if best is None or sizes[c] > sizes[best]:
                best = c
        if best is not None and sets[best] == common:
            return best
        return None

    meet_t = [[0] * n for _ in range(n)]
    join_t = [[0] * n for _ in range(n)]
    for i in range(n):
        meet_t[i][i] = join_t[i][i] = i
        for j in range(i + 1, n):
            m = bound(down[i] & down[j], down, pop)
            if m is None:
                raise NotALattice(f"{elements[i]!r} and {elements[j]!r} have no meet", (elements[i], elements[j]))
            jn = bound(up[i] & up[j], up, pop_up)
            if jn is None:
                raise NotALattice(f"{elements[i]!r} and {elements[j]!r} have no join", (elements[i], elements[j]))
            meet_t[i][j] = meet_t[j][i] = m
            join_t[i][j] = join_t[j][i] = jn
    return FiniteLattice(elements, up, meet_t, join_t)


def chain(ids: Sequence[str]) -> FiniteLattice:
    """The chain ``ids[0] < ids[1] < ...``."""
    return validate_lattice(ids, zip(ids, ids[1:]))


def product_lattice(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    elements = [f"({x},{y})" for x in a.elements for y in b.elements]
    pairs = [
        (f"({x},{y})", f"({u},{v})")
        for x in a.elements
        for y in b.elements
        for u in a.up_set(x)
        for v in b.up_set(y)
    ]
    return validate_lattice(elements, pairs)


# -- extended non-negative rationals ------------------------------------

INF = math.inf


def ext_value(v):
    """Coerce ``v`` to a Fraction or ``INF``."""
    if isinstance(v, str):
        s = v.strip()
        if s in ("inf", "∞"):
            return INF
        try:
            v = Fraction(s)
        except ValueError:
            raise ElementNotInLattice(f"bad rational literal {v!r}") from None
    elif isinstance(v, float):
        if v == INF:
            return INF
        v = Fraction(v)
    elif isinstance(v, int) and not isinstance(v, bool):
        v = Fraction(v)
    if not isinstance(v, Fraction) or v < 0:
        raise ElementNotInLattice(f"{v!r} is not in [0, inf]")
    return v


class ExtRationalLattice:
    """``[0, ∞]`` restricted to rationals plus infinity, kept symbolic."""

    kind = "ext_rationals"
    bottom = Fraction(0)
    top = INF

    def __eq__(self, other):
        return isinstance(other, ExtRationalLattice)

    def __hash__(self):
        return hash("ext_rationals")

    def __repr__(self):
        return "ExtRationalLattice()"

    def contains(self, v) -> bool:
        if isinstance(v, bool):
            return False
        return v == INF or (isinstance(v, (Fraction, int)) and v >= 0)

    def _check(self, v):
        if not self.contains(v):
            raise ElementNotInLattice(f"{v!r} is not in [0, inf]")
        return v

    def leq(self, a, b) -> bool:
        return self._check(a) <= self._check(b)

    def meet(self, values: Iterable):
        return min((self._check(v) for v in values), default=INF)

    def join(self, values: Iterable):
        return max((self._check(v) for v in values), default=Fraction(0))

    def well_above(self, y, x) -> bool:
        # density: x + (y - x)/n witnesses any S with inf S <= x when y > x
        return self._check(y) > self._check(x)

    def epsilon_basis(self, realized: Iterable = ()) -> list:
        pos = sorted({self._check(v) for v in realized if v > 0})
        return pos or [Fraction(1)]

    def positive_representatives(self, realized: Iterable = ()) -> list:
        """One radius per distinct ball shape over the realized distances."""
        finite = sorted({self._check(v) for v in realized if 0 < v < INF})
        return finite + [INF]

    def is_value_distributive(self) -> bool:
        return True

    def value_id(self, v) -> str:
        v = self._check(v)
        return "inf" if v == INF else str(v)

    def value_to_json(self, v):
        return self.value_id(v)

    def value_from_json(self, obj):
        return ext_value(obj)

    def to_json(self) -> dict:
        return {"kind": "ext_rationals"}


EXT_RATIONALS = ExtRationalLattice()


# -- module-level entry points ------------------------------------------


def well_above(lattice: ValueLattice, y, x) -> bool:
    return lattice.well_above(y, x)


def is_completely_distributive(lattice: FiniteLattice) -> bool:
    return lattice.is_completely_distributive()


def is_value_distributive(lattice: FiniteLattice) -> bool:
    return lattice.is_value_distributive()


def epsilon_basis(lattice: ValueLattice, realized: Iterable = ()) -> list:
    """A finite subset of ``V_≺`` that decides every ε-monotone predicate."""
    return lattice.epsilon_basis(realized)
