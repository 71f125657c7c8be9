from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_from
from premetrics.errors import ElementNotInLattice, NotALattice, NotAPartialOrder, NotValueDistributive
from premetrics.instances import CHAIN2, CHAIN3, diamond, m3, n5
from premetrics.lattice import (
    EXT_RATIONALS,
    INF,
    chain,
    epsilon_basis,
    ext_value,
    is_completely_distributive,
    is_value_distributive,
    product_lattice,
    validate_lattice,
    well_above,
)

SQUARE = product_lattice(CHAIN2, CHAIN2)
ONE = chain(["0"])
LATTICES = [ONE, CHAIN2, CHAIN3, chain("abcd"), SQUARE, diamond(), m3(), n5(), product_lattice(CHAIN2, CHAIN3)]


def test_validate_rejects_cycles_and_non_lattices():
    with pytest.raises(NotAPartialOrder):
        validate_lattice(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(NotALattice) as info:
        # two incomparable maximal elements: no join
        validate_lattice(["0", "a", "b"], [("0", "a"), ("0", "b")])
    assert set(info.value.pair) == {"a", "b"}
    with pytest.raises(NotALattice):
        validate_lattice(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def test_validate_rejects_unknown_ids():
    with pytest.raises(ElementNotInLattice):
        validate_lattice(["a"], [("a", "z")])


@pytest.mark.parametrize("L", LATTICES, ids=repr)
def test_meet_join_match_brute_force(L):
    B = brute_from(L)
    for a in L.elements:
        for b in L.elements:
            assert L.meet([a, b]) == B.meet([a, b])
            assert L.join([a, b]) == B.join([a, b])
            assert L.leq(a, b) == B.leq(a, b)
    assert L.meet([]) == L.top and L.join([]) == L.bottom


@pytest.mark.parametrize("L", LATTICES, ids=repr)
def test_well_above_matches_subset_oracle(L):
    B = brute_from(L)
    for y in L.elements:
        for x in L.elements:
            assert L.well_above(y, x) == B.well_above(y, x), (y, x)


@pytest.mark.parametrize("L", LATTICES, ids=repr)
def test_distributivity_matches_oracle(L):
    B = brute_from(L)
    assert L.is_completely_distributive() == B.completely_distributive()
    assert L.is_value_distributive() == (B.completely_distributive() and B.value_distributive())


def test_chain_examples():
    # every element of a finite chain is well above itself
    assert all(CHAIN3.well_above(m, m) for m in CHAIN3.elements)
    assert CHAIN3.well_above("1", "m") and not CHAIN3.well_above("m", "1")
    assert sorted(CHAIN3.positives()) == ["0", "1", "m"]
    assert ONE.is_value_distributive() and ONE.epsilon_basis() == ["0"]


def test_diamond_and_m3():
    D = diamond()
    assert D.is_completely_distributive()
    assert not m3().is_completely_distributive()
    assert not m3().is_value_distributive()
    assert not n5().is_completely_distributive()


def test_square_witness():
    w = SQUARE.value_distributivity_witness()
    assert w["pair"] == ["(0,1)", "(1,0)"] and w["meet"] == "(0,0)"
    assert not SQUARE.well_above("(0,0)", "(0,0)")
    assert SQUARE.well_above("(0,1)", "(0,0)") and SQUARE.well_above("(1,0)", "(0,0)")
    with pytest.raises(NotValueDistributive):
        SQUARE.epsilon_basis()


def test_module_level_helpers():
    assert well_above(CHAIN3, "1", "0")
    assert is_completely_distributive(SQUARE) and not is_value_distributive(SQUARE)
    assert epsilon_basis(CHAIN3, ["m"]) == ["0"]


def test_ext_rationals_well_above_is_strict_order():
    R = EXT_RATIONALS
    assert R.well_above(Fraction(1), Fraction(0))
    assert not R.well_above(Fraction(0), Fraction(0))
    assert R.well_above(INF, Fraction(10**9))
    assert not R.well_above(INF, INF)
    assert R.is_value_distributive()
    assert R.epsilon_basis([Fraction(0), Fraction(2), INF]) == [Fraction(2), INF]
    assert R.epsilon_basis([Fraction(0)]) == [Fraction(1)]


def test_ext_value_parsing():
    assert ext_value("inf") == INF
    assert ext_value("3/4") == Fraction(3, 4)
    assert ext_value(2) == Fraction(2)
    assert EXT_RATIONALS.value_id(Fraction(1, 2)) == "1/2"
    assert EXT_RATIONALS.value_from_json(EXT_RATIONALS.value_to_json(INF)) == INF


def test_product_lattice_ids():
    assert SQUARE.elements[0] == "(0,0)" and len(product_lattice(CHAIN3, CHAIN3)) == 9


values = st.fractions(min_value=0, max_value=100) | st.just(INF)


@given(values, values, values)
def test_ext_rational_well_above_is_transitive(a, b, c):
    R = EXT_RATIONALS
    if R.well_above(a, b) and R.well_above(b, c):
        assert R.well_above(a, c)


@given(st.sampled_from(LATTICES), st.data())
def test_well_above_implies_order(L, data):
    y = data.draw(st.sampled_from(L.elements))
    x = data.draw(st.sampled_from(L.elements))
    if L.well_above(y, x):
        assert L.leq(x, y)
    # monotone in both arguments
    for y2 in L.up_set(y):
        for x2 in L.down_set(x):
            if L.well_above(y, x):
                assert L.well_above(y2, x2)
