import json

import pytest

from oracles import literal_eps_delta, literal_top_continuous, literal_topology
from premetrics.errors import ProbeTooLarge
from premetrics.instances import CHAIN2, CHAIN3, counterexample_space, default_probes, sierpinski, space, suite_spaces
from premetrics.colimits import coproduct
from premetrics.limits import product
from premetrics.space import (
    SpaceMap,
    all_functions,
    discrete_topology,
    enumerate_topologies,
    flagg,
    indiscrete_topology,
    is_eps_delta_continuous,
    is_top_continuous,
)
from premetrics.verify import (
    VerificationReport,
    balls_open,
    check_adjunction,
    check_colimit,
    check_limit,
    check_O_preservation,
    coequaliser_instance,
    continuity_gap_search,
    count_limit_mediators,
    equaliser_instance,
    is_mutant,
    merge_reports,
    mutate_all_bottom,
    mutate_cross_bottom,
    product_diagram,
    replay,
    round_trip_suite,
)

DISCRETE2 = space(["p", "q"], CHAIN2, {("p", "q"): "1", ("q", "p"): "1"})
ZERO2 = space(["p", "q"], CHAIN2, {("p", "q"): "0", ("q", "p"): "0"})
ONE = space(["p"], CHAIN2, {})
SMALL_PROBES = [p for p in default_probes() if len(p.points) <= 2]


def test_product_of_two_point_spaces_passes():
    r = check_limit(product([DISCRETE2, ZERO2]), product_diagram([DISCRETE2, ZERO2]), SMALL_PROBES)
    assert r.verdict and r.checked > 0 and r.counterexample is None


def test_all_bottom_mutant_fails_and_replays():
    cand = product([DISCRETE2, DISCRETE2])
    mutant = mutate_all_bottom(cand)
    assert is_mutant(cand, mutant)
    r = check_limit(mutant, product_diagram([DISCRETE2, DISCRETE2]))
    assert not r.verdict
    assert replay(r)
    json.dumps(r.to_json())


def test_equaliser_passes():
    C = counterexample_space()
    f = SpaceMap(C, C, {"a": "a", "b": "b", "c": "a", "d": "d"})
    g = SpaceMap(C, C, {"a": "a", "b": "b", "c": "c", "d": "a"})
    assert is_eps_delta_continuous(f) and is_eps_delta_continuous(g)
    cand, diagram = equaliser_instance(f, g)
    assert cand[0].points == ("a", "b")
    assert check_limit(cand, diagram)


def test_colimit_examples():
    cand, diagram = coequaliser_instance(suite_spaces()[5], [])
    assert check_colimit(cand, diagram)
    assert check_colimit(coproduct([ONE, ONE]), product_diagram([ONE, ONE]))


def test_cross_bottom_mutant_fails_and_replays():
    cand = coproduct([ONE, ONE])
    r = check_colimit(mutate_cross_bottom(cand), product_diagram([ONE, ONE]))
    assert not r.verdict and r.counterexample["check"] == "colimit_mediators"
    assert replay(r)


def test_leg_continuity_failure_replays():
    cand = product([DISCRETE2, DISCRETE2])
    r = check_limit(mutate_all_bottom(cand), product_diagram([DISCRETE2, DISCRETE2]))
    assert r.counterexample["check"] in ("eps_delta_continuous", "limit_mediators")
    assert replay(r)


def test_mediator_count_is_exhaustive():
    P, legs = product([DISCRETE2, DISCRETE2])
    cone = [{"p": "p", "q": "q"}, {"p": "q", "q": "p"}]
    assert count_limit_mediators(P, legs, DISCRETE2, cone, 4096) == 1


def test_probe_guard():
    big = space(list("abcdef"), CHAIN2, {(x, y): "1" for x in "abcdef" for y in "abcdef" if x != y})
    with pytest.raises(ProbeTooLarge):
        check_limit(product([big, big]), product_diagram([big, big]), [big], max_functions=100)
    with pytest.raises(ProbeTooLarge):
        check_adjunction(discrete_topology("xyz"), [big], max_functions=100)


def test_adjunction_examples():
    r = check_adjunction(sierpinski(), [DISCRETE2])
    assert r.verdict and r.checked == 4
    T = discrete_topology(["x", "y"])
    F = flagg(T)
    passing = [g for g in all_functions(ZERO2.points, T.points) if is_eps_delta_continuous(SpaceMap(ZERO2, F, g))]
    assert passing == [{"p": "x", "q": "x"}, {"p": "y", "q": "y"}]
    assert check_adjunction(T, [ZERO2])
    assert check_adjunction(discrete_topology(["x"]), default_probes())


def test_O_preservation_examples():
    sier = space(["p", "q"], CHAIN2, {("p", "q"): "1", ("q", "p"): "0"})
    assert sier.topology.open_sets() == [[], ["p"], ["p", "q"]]
    assert check_O_preservation("coproduct", [sier, sier])
    assert check_O_preservation("coequaliser", (DISCRETE2, [["p", "q"]]))
    r = check_O_preservation("product", [sier, DISCRETE2])
    assert r and r.details["relation"] == "finer_or_equal"


def test_round_trip_suite():
    for n, count in ((1, 1), (2, 4), (3, 29), (4, 355)):
        r = round_trip_suite(n)
        assert r.verdict and r.checked == count and r.details["passed"] == count


def test_gap_search_flagg_targets_have_no_gaps():
    sources = [p for p in default_probes() if len(p.points) <= 2] + suite_spaces()
    for T in enumerate_topologies(2):
        F = flagg(T)
        assert balls_open(F)
        for S in sources:
            r = continuity_gap_search(S, F)
            assert r.verdict and r.details["gaps"] == []


def test_gap_search_counterexample_matches_definition():
    C = counterexample_space()
    assert not balls_open(C)
    for S in suite_spaces()[:5]:
        r = continuity_gap_search(S, C)
        assert r.verdict
        lit_s, lit_c = literal_topology(S), literal_topology(C)
        expected = []
        for a in all_functions(S.points, C.points):
            top = literal_top_continuous(lit_s, lit_c, S.points, a)
            if top and not literal_eps_delta(S, C, a):
                expected.append(a)
        assert [g["assignment"] for g in r.details["gaps"]] == expected
    r = continuity_gap_search(C, C)
    assert r.details["gaps"], "the displayed space admits a continuous map that is not ε-δ continuous"


def test_one_point_source_never_gaps():
    for T in [counterexample_space()] + suite_spaces():
        r = continuity_gap_search(ONE, T)
        assert r.details["gaps"] == []


def test_coincidence_when_balls_open():
    """No topologically-continuous-but-not-ε-δ map into a target with open balls."""
    targets = [S for S in suite_spaces() + SMALL_PROBES if balls_open(S)]
    targets += [flagg(T) for T in enumerate_topologies(3)]
    sources = suite_spaces()
    for T in targets:
        for S in sources:
            if len(T.points) ** len(S.points) > 4096:
                continue
            assert continuity_gap_search(S, T).verdict


def test_reports_merge_deterministically():
    a = VerificationReport("b", "x", True)
    b = VerificationReport("a", "y", False, {"check": "commute"})
    assert merge_reports([a, b]) == merge_reports([b, a])
    assert merge_reports([a, b])["verdict"] == "fail"


def test_replay_of_passing_report_is_false():
    assert not replay(round_trip_suite(1))


def test_top_continuity_accepts_topologies():
    f = SpaceMap(sierpinski(), indiscrete_topology(["u", "v"]), {"x": "u", "y": "v"})
    assert is_top_continuous(f)
