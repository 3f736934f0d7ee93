import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbn.errors import BindingError, StructuralError
from sbn.games import make_letsplay, make_nocount, make_two_player_nocount, \
    gen_skew_symmetric
from sbn.model import (
    ChanceSpec, Domain, PayoffSpec, SbnGraph, StrategicSpec, StrategyFamily,
    StrategyProfile, TableCpd, bind, enumerate_profiles, payoff_vector,
    profile_count, topological_order, validate,
)

from _random_nets import random_sbn


def pay_domain():
    return Domain([payoff_vector(0), payoff_vector(1)])


def test_minimal_graph_is_valid(coin_graph):
    assert validate(coin_graph) == []


def test_cycle_is_reported():
    ab = TableCpd(("b",), {(0,): (1.0,), (1,): (1.0,)})
    ba = TableCpd(("a",), {(0,): (0.5, 0.5)})
    pay = TableCpd((), {(): (1.0,)})
    g = SbnGraph(1, {
        "a": ChanceSpec(Domain([0]), ab),
        "b": ChanceSpec(Domain([0, 1]), ba),
        "pi": PayoffSpec(Domain([payoff_vector(1)]), "all", pay),
    })
    assert any(v.code == "cycle" for v in validate(g))


def test_incomplete_cpd_names_the_node():
    cpd = TableCpd((), {(): (0.5, 0.5)})
    pay = TableCpd(("a",), {(0,): (1.0, 0.0)})   # row for a=1 missing
    g = SbnGraph(1, {
        "a": ChanceSpec(Domain([0, 1]), cpd),
        "pi": PayoffSpec(pay_domain(), "all", pay),
    })
    bad = [v for v in validate(g) if v.code == "bad-cpd"]
    assert bad and bad[0].node == "pi"
    assert "incomplete" in bad[0].message


def test_unnormalized_row_is_reported():
    g = SbnGraph(1, {
        "a": ChanceSpec(Domain([0, 1]), TableCpd((), {(): (0.5, 0.6)})),
        "pi": PayoffSpec(pay_domain(), "all",
                         TableCpd(("a",), {(0,): (1.0, 0.0), (1,): (0.0, 1.0)})),
    })
    assert any("sum to 1" in v.message for v in validate(g))


def test_payoff_structure_violations():
    coin = TableCpd((), {(): (1.0,)})
    pay = TableCpd((), {(): (1.0,)})
    two_elided = SbnGraph(1, {
        "a": ChanceSpec(Domain([0]), coin),
        "p1": PayoffSpec(Domain([payoff_vector(0)]), "all", pay),
        "p2": PayoffSpec(Domain([payoff_vector(0)]), "all", pay),
    })
    assert any(v.code == "payoff-structure" for v in validate(two_elided))

    missing_player = SbnGraph(2, {
        "a": ChanceSpec(Domain([0]), coin),
        "p0": PayoffSpec(Domain([payoff_vector(0)]), 0, pay),
    })
    assert any(v.code == "payoff-structure" for v in validate(missing_player))


def test_payoff_node_must_be_sink():
    pay = TableCpd((), {(): (1.0,)})
    child = TableCpd(("pi",), {((0,),): (1.0,)})
    g = SbnGraph(1, {
        "pi": PayoffSpec(Domain([payoff_vector(0)]), "all", pay),
        "c": ChanceSpec(Domain([0]), child),
    })
    assert any(v.code == "payoff-child" for v in validate(g))


def test_deterministic_flag_enforced():
    stochastic = TableCpd((), {(): (0.5, 0.5)})
    fam = StrategyFamily("f", (("wobble", stochastic),), deterministic=True)
    g = SbnGraph(1, {
        "r": StrategicSpec(Domain([0, 1]), 0, fam),
        "pi": PayoffSpec(pay_domain(), "all",
                         TableCpd(("r",), {(0,): (1.0, 0.0),
                                           (1,): (0.0, 1.0)})),
    })
    assert any(v.code == "not-deterministic" for v in validate(g))


def test_duplicate_domain_values():
    g = SbnGraph(1, {
        "a": ChanceSpec(Domain([0, 0]), TableCpd((), {(): (0.5, 0.5)})),
        "pi": PayoffSpec(pay_domain(), "all",
                         TableCpd(("a",), {(0,): (1.0, 0.0)})),
    })
    assert any(v.code == "domain" for v in validate(g))


def test_topological_order_chain_and_diamond():
    chain = SbnGraph(1, {
        "a": ChanceSpec(Domain([0]), TableCpd((), {(): (1.0,)})),
        "b": ChanceSpec(Domain([0]), TableCpd(("a",), {(0,): (1.0,)})),
        "pi": PayoffSpec(Domain([payoff_vector(0)]), "all",
                         TableCpd(("b",), {(0,): (1.0,)})),
    })
    assert topological_order(chain) == ["a", "b", "pi"]

    one = TableCpd(("a",), {(0,): (1.0,)})
    diamond = SbnGraph(1, {
        "a": ChanceSpec(Domain([0]), TableCpd((), {(): (1.0,)})),
        "y": ChanceSpec(Domain([0]), one),
        "x": ChanceSpec(Domain([0]), one),
        "pi": PayoffSpec(Domain([payoff_vector(0)]), "all",
                         TableCpd(("x", "y"), {(0, 0): (1.0,)})),
    })
    assert topological_order(diamond) == ["a", "x", "y", "pi"]


def test_topological_order_nocount():
    bundle = make_nocount(2.0)
    assert topological_order(bundle.graph) == ["a", "b", "x", "pi"]


def test_topological_order_cycle_raises():
    ab = TableCpd(("b",), {(0,): (1.0,)})
    ba = TableCpd(("a",), {(0,): (1.0,)})
    g = SbnGraph(1, {"a": ChanceSpec(Domain([0]), ab),
                     "b": ChanceSpec(Domain([0]), ba),
                     "pi": PayoffSpec(Domain([payoff_vector(0)]), "all",
                                      TableCpd((), {(): (1.0,)}))})
    with pytest.raises(StructuralError):
        topological_order(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_topological_order_respects_edges(seed):
    g = random_sbn(seed)
    order = topological_order(g)
    assert sorted(order) == sorted(g.nodes)
    pos = {n: i for i, n in enumerate(order)}
    for n in g.nodes:
        for p in g.parents_of(n):
            assert pos[p] < pos[n]


def test_bind_constant_action_ignores_parent():
    bundle = make_nocount(2.0)
    g = bundle.graph
    idx = g.nodes["x"].family.index_of("constant-3")
    bound = bind(g, StrategyProfile({"x": idx}))
    dom = g.nodes["x"].domain
    row = bound.resolved["x"].row(["01"], [g.nodes["b"].domain], dom)
    assert row[dom.index(3)] == 1.0 and row.sum() == 1.0


def test_bind_counter_maps_strings_to_popcount():
    bundle = make_two_player_nocount(fixed_n=3, g_max=3)
    g = bundle.graph
    counter = g.nodes["y"].family.index_of("counter")
    bound = bind(g, StrategyProfile({"x": 1, "y": counter}))
    dom = g.nodes["y"].domain
    for s in ["0", "101", "111", "010"]:
        row = bound.resolved["y"].row([s], [g.nodes["b"].domain], dom)
        assert row[dom.index(s.count("1"))] == 1.0


def test_bind_missing_choice():
    bundle = make_two_player_nocount(fixed_n=2, g_max=2)
    with pytest.raises(BindingError, match="y unbound"):
        bind(bundle.graph, StrategyProfile({"x": 0}))


def test_bind_out_of_range_choice():
    bundle = make_nocount(2.0)
    size = len(bundle.graph.nodes["x"].family)
    with pytest.raises(BindingError, match="out of range"):
        bind(bundle.graph, StrategyProfile({"x": size}))


def test_enumerate_profiles_orders_and_counts():
    fam3 = StrategyFamily("f3", tuple(
        (f"a{i}", TableCpd((), {(): tuple(1.0 if j == i else 0.0
                                          for j in range(3))}))
        for i in range(3)))
    fam2 = StrategyFamily("f2", fam3.strategies[:2])
    g = SbnGraph(1, {
        "r": StrategicSpec(Domain([0, 1, 2]), 0, fam3),
        "q": StrategicSpec(Domain([0, 1, 2]), 0, fam2),
        "pi": PayoffSpec(Domain([payoff_vector(0)]), "all",
                         TableCpd((), {(): (1.0,)})),
    })
    profiles = list(enumerate_profiles(g))
    assert len(profiles) == 6 == profile_count(g)
    seen = [(p["q"], p["r"]) for p in profiles]
    assert seen == sorted(seen)   # lexicographic in (node id, index)


def test_enumerate_profiles_letsplay_count():
    pool = [gen_skew_symmetric(3, 1, s) for s in (1, 2)]
    bundle = make_letsplay(
        pool, [0.5, 0.5],
        a_family_spec=("lp-nash", "uniform", "pure-0", "br-to-uniform"),
        b_family_spec=("uniform", "pure-0", "pure-1"))
    assert profile_count(bundle.graph) == 4 * 3
    assert len(list(enumerate_profiles(bundle.graph))) == 12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_bound_network_rows_stay_normalized(seed):
    g = random_sbn(seed)
    for profile in enumerate_profiles(g):
        bound = bind(g, profile)
        for name, cpd in bound.resolved.items():
            assert not cpd.check(g.parent_domains(name),
                                 g.nodes[name].domain, exact=False)
        break   # one profile suffices per graph
