import json
from fractions import Fraction

import pytest

from sbn import serialize
from sbn.errors import FormatError
from sbn.inference import exact_expected_payoffs
from sbn.model import (
    ChanceSpec, Domain, PayoffSpec, SbnGraph, StrategyProfile, TableCpd,
    bind, enumerate_profiles, payoff_vector, validate,
)
from sbn.games import make_two_player_nocount

import numpy as np


def test_round_trip_identity(coin_graph):
    doc = serialize.serialize(coin_graph)
    again = serialize.parse(json.loads(json.dumps(doc)))
    assert again == coin_graph


def test_round_trip_xor(xor_graph):
    assert serialize.parse(serialize.serialize(xor_graph)) == xor_graph


def test_round_trip_exact_fractions():
    g = SbnGraph(1, {
        "a": ChanceSpec(Domain([0, 1]),
                        TableCpd((), {(): (Fraction(1, 3), Fraction(2, 3))})),
        "pi": PayoffSpec(Domain([payoff_vector("1/2"), payoff_vector(1)]),
                         "all",
                         TableCpd(("a",), {(0,): (Fraction(1), Fraction(0)),
                                           (1,): (Fraction(0), Fraction(1))})),
    }, exact=True)
    assert validate(g) == []
    text = serialize.dumps(g)
    again = serialize.loads(text)
    assert again == g
    assert again.exact
    row = again.nodes["a"].cpd.rows[()]
    assert row == (Fraction(1, 3), Fraction(2, 3))


def test_materialized_graph_round_trips_semantically():
    bundle = make_two_player_nocount(fixed_n=2, g_max=2)
    again = serialize.loads(serialize.dumps(bundle.graph))
    assert validate(again) == []
    for profile in enumerate_profiles(bundle.graph):
        a = exact_expected_payoffs(bind(bundle.graph, profile))
        b = exact_expected_payoffs(bind(again, profile))
        assert np.abs(a - b).max() < 1e-12


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.update(extra=1), "unknown fields"),
    (lambda d: d.pop("players"), "missing fields"),
    (lambda d: d["nodes"][0].update(color="red"), "unknown fields"),
    (lambda d: d["nodes"][0].update(kind="magic"), "unknown kind"),
    (lambda d: d["nodes"][0].update(id=""), "non-empty"),
])
def test_strict_rejections(coin_graph, mutate, message):
    doc = serialize.serialize(coin_graph)
    mutate(doc)
    with pytest.raises(FormatError, match=message):
        serialize.parse(doc)


def test_duplicate_ids_rejected(coin_graph):
    doc = serialize.serialize(coin_graph)
    doc["nodes"].append(dict(doc["nodes"][0]))
    with pytest.raises(FormatError, match="duplicate id"):
        serialize.parse(doc)


def test_duplicate_rows_rejected(coin_graph):
    doc = serialize.serialize(coin_graph)
    rows = doc["nodes"][1]["cpd"]
    rows.append(dict(rows[0]))
    with pytest.raises(FormatError, match="duplicate parent assignment"):
        serialize.parse(doc)


def test_wrong_given_arity_rejected(coin_graph):
    doc = serialize.serialize(coin_graph)
    doc["nodes"][1]["cpd"][0]["given"] = []
    with pytest.raises(FormatError, match="one value per parent"):
        serialize.parse(doc)


def test_float_domain_value_rejected(coin_graph):
    doc = serialize.serialize(coin_graph)
    doc["nodes"][0]["domain"] = [0.5, 1]
    with pytest.raises(FormatError, match="not an integer, symbol"):
        serialize.parse(doc)


def test_payoff_vectors_accept_numbers_and_strings():
    doc = {
        "players": 2,
        "nodes": [
            {"id": "pi", "kind": "payoff", "owner": "all",
             "domain": [[0, 0], ["1/2", 0.5]],
             "parents": [], "cpd": [{"given": [], "p": [0.25, "3/4"]}]},
        ],
    }
    g = serialize.parse(doc)
    dom = g.nodes["pi"].domain
    assert dom[1] == (Fraction(1, 2), Fraction(1, 2))
    assert g.nodes["pi"].cpd.rows[()] == (0.25, Fraction(3, 4))


def test_strategic_requires_family(coin_graph):
    doc = serialize.serialize(coin_graph)
    doc["nodes"][0]["kind"] = "strategic"
    with pytest.raises(FormatError, match="'owner' and 'family'"):
        serialize.parse(doc)
