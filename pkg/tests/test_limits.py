from fractions import Fraction
from itertools import product as cartesian

import pytest

from premetrics.errors import InvalidMap, SizeGuardError
from premetrics.instances import CHAIN2, CHAIN3, counterexample_space, default_probes, space, suite_spaces
from premetrics.lattice import chain
from premetrics.limits import (
    Cone,
    equaliser,
    initial_lift,
    phi_embed,
    positives_product_ground,
    product,
    pullback_premetric,
    tuple_id,
)
from premetrics.space import SpaceMap, all_functions, discrete_topology, generate_topology, is_eps_delta_continuous
from premetrics.verify import product_topology

CHAINS = [chain(["0"]), CHAIN2, CHAIN3]
DISCRETE2 = space(["p", "q"], CHAIN2, {("p", "q"): "1", ("q", "p"): "1"})


def test_pullback_examples():
    C = counterexample_space()
    assert pullback_premetric({x: x for x in C.points}, C) == C
    Z = pullback_premetric({"p": "a", "q": "a"}, C)
    assert set(Z.d.values()) == {Fraction(0)}
    P = pullback_premetric({"p": "a", "q": "c"}, C)
    assert P.d["p", "q"] == Fraction(2)


def test_positive_ground_sizes():
    assert len(positives_product_ground([CHAIN3, CHAIN3])) == 9
    U = positives_product_ground([CHAIN3])
    assert sorted(t[0] for t in U.tuples) == sorted(CHAIN3.positives())
    E = positives_product_ground([])
    assert E.tuples == [()] and E.ground.ids == ("()",)


def test_phi_embed_examples():
    U = positives_product_ground([CHAIN3, CHAIN3])
    assert phi_embed(("0", "0"), U) == U.lattice.bottom
    assert phi_embed(("1", "1"), U).to_json() == [["(1,1)"]]


@pytest.mark.parametrize("A,B", [(a, b) for a in CHAINS for b in CHAINS] + [(a, None) for a in CHAINS])
def test_phi_embed_is_order_embedding(A, B):
    lattices = [A] if B is None else [A, B]
    U = positives_product_ground(lattices)
    tuples = list(cartesian(*[L.elements for L in lattices]))
    W = U.lattice
    for x in tuples:
        for y in tuples:
            le = all(L.leq(a, b) for L, a, b in zip(lattices, x, y))
            assert le == W.leq(phi_embed(x, U), phi_embed(y, U)), (x, y)
            assert (x == y) == (phi_embed(x, U) == phi_embed(y, U))


def test_size_guard():
    with pytest.raises(SizeGuardError):
        positives_product_ground([CHAIN3] * 4, max_ground=50)


def test_initial_lift_single_identity_leg():
    for S in suite_spaces():
        L, legs = initial_lift(Cone(S.points, [({x: x for x in S.points}, S)]))
        assert generate_topology(L) == generate_topology(S)
        assert is_eps_delta_continuous(legs[0])


def test_two_equal_legs_same_topology():
    for S in suite_spaces():
        a = {x: x for x in S.points}
        one, _ = initial_lift(Cone(S.points, [(a, S)]))
        two, _ = initial_lift(Cone(S.points, [(a, S), (a, S)]))
        assert generate_topology(one) == generate_topology(two)


def test_empty_cones():
    L, legs = initial_lift(Cone([], [(dict(), DISCRETE2)]))
    assert L.points == () and legs[0].assignment == {}
    P, legs = product([])
    assert P.points == ("()",) and legs == []


def test_product_examples():
    one = space(["p"], CHAIN2, {})
    P, _ = product([one, one])
    assert len(P.points) == 1
    P, legs = product([DISCRETE2, DISCRETE2])
    assert len(P.points) == 4
    assert generate_topology(P) == discrete_topology(P.points)
    assert all(is_eps_delta_continuous(leg) for leg in legs)


def test_product_topology_finer_or_equal():
    S = suite_spaces()
    for A in S:
        for B in S:
            P, _ = product([A, B])
            assert generate_topology(P).is_finer_or_equal(product_topology([A.topology, B.topology]))


def test_factoring_property():
    """A map into the lift is continuous iff every leg after it is."""
    S = suite_spaces()
    pairs = [(S[1], S[4]), (S[3], S[4]), (S[5], S[1]), (S[6], S[3])]
    probes = [p for p in default_probes() if len(p.points) <= 2]
    for A, B in pairs:
        P, legs = product([A, B])
        for Z in probes:
            for h in all_functions(Z.points, P.points):
                f = SpaceMap(Z, P, h)
                composites = [leg.compose(f) for leg in legs]
                assert is_eps_delta_continuous(f) == all(is_eps_delta_continuous(c) for c in composites)


def test_eps_hat_gadget():
    for A in suite_spaces():
        for B in suite_spaces()[:5]:
            P, legs = product([A, B])
            U = P.product_ground
            W = U.lattice
            for j, leg in enumerate(legs):
                target = leg.target
                for eps in target.lattice.positives():
                    hat = tuple(eps if k == j else L.top for k, L in enumerate(U.lattices))
                    bar = W.principal([U.tuple_id(hat)])
                    for x in P.points:
                        for y in P.points:
                            if W.well_above(bar, P.d[x, y]):
                                assert target.lattice.well_above(eps, target.d[leg(x), leg(y)])


def test_equaliser_examples():
    C = counterexample_space()
    ident = SpaceMap(C, C, {x: x for x in C.points})
    Z, incl = equaliser(ident, ident)
    assert Z.points == C.points
    swap = SpaceMap(C, C, {"a": "b", "b": "a", "c": "d", "d": "c"})
    Z, _ = equaliser(ident, swap)
    assert Z.points == ()
    g = SpaceMap(C, C, {"a": "a", "b": "b", "c": "a", "d": "a"})
    Z, incl = equaliser(ident, g)
    assert Z.points == ("a", "b")
    assert Z.d["a", "b"] == 0 and Z.d["b", "a"] == 0
    assert is_eps_delta_continuous(incl)
    with pytest.raises(InvalidMap):
        equaliser(ident, SpaceMap(DISCRETE2, C, {"p": "a", "q": "a"}))


def test_tuple_ids():
    assert tuple_id(["a", "b"]) == "(a,b)"
    P, _ = product([DISCRETE2, DISCRETE2])
    assert P.points == ("(p,p)", "(p,q)", "(q,p)", "(q,q)")
