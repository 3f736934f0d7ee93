import math
from fractions import Fraction

import numpy as np
import pytest

from sbn.errors import CapacityError, ContractError
from sbn.games import best_constant_guess, make_nocount, make_two_player_nocount
from sbn.inference import (
    enumerate_support, exact_expected_payoffs, exact_expected_payoffs_rational,
    mc_expected_payoffs, sample,
)
from sbn.model import (
    ChanceSpec, Domain, PayoffSpec, SbnGraph, StrategyProfile, TableCpd,
    bind, enumerate_profiles, payoff_vector,
)

from _random_nets import random_sbn
from _reference import reference_expected_payoffs, reference_support_size


def point_mass_graph(value=7):
    dom = Domain([value])
    return SbnGraph(1, {
        "a": ChanceSpec(dom, TableCpd((), {(): (1.0,)})),
        "pi": PayoffSpec(Domain([payoff_vector(value)]), "all",
                         TableCpd(("a",), {(value,): (1.0,)})),
    })


def test_point_mass_sample():
    bound = bind(point_mass_graph(), StrategyProfile({}))
    out = sample(bound, 123)
    assert out.assignment["a"] == 7
    assert out.payoffs == (7.0,)


def test_sample_deterministic(coin_graph):
    bound = bind(coin_graph, StrategyProfile({}))
    for seed in (0, 1, 2 ** 63, 2 ** 64 - 1):
        assert sample(bound, seed) == sample(bound, seed)


def test_fair_coin_frequency(coin_graph):
    bound = bind(coin_graph, StrategyProfile({}))
    hits = sum(sample(bound, seed).payoffs[0] for seed in range(10_000))
    assert 0.48 <= hits / 10_000 <= 0.52


def test_nocount_sample_wins_iff_popcount_matches():
    bundle = make_nocount(2.0)
    g = bundle.graph
    guess = 2
    bound = bind(g, StrategyProfile({"x": g.nodes["x"].family.index_of(
        "constant-2")}))
    for seed in range(200):
        out = sample(bound, seed)
        won = out.payoffs[0] == 1.0
        assert won == (out.assignment["b"].count("1") == guess)


def test_exact_fair_coin(coin_graph):
    bound = bind(coin_graph, StrategyProfile({}))
    assert np.allclose(exact_expected_payoffs(bound), [0.5], atol=0)


def test_exact_two_player_fixture():
    bundle = make_two_player_nocount(fixed_n=2, g_max=2)
    counter = bundle.graph.nodes["y"].family.index_of("counter")
    bound = bind(bundle.graph, StrategyProfile({"x": 1, "y": counter}))
    # Hand enumeration: popcount ~ Binomial(2, 1/2); x=1 wins w.p. 1/2 and
    # always splits with the counter, so payoffs are (1/4, 3/4).
    assert np.abs(exact_expected_payoffs(bound) - [0.25, 0.75]).max() < 1e-12


def test_exact_nocount_best_constant_matches_bruteforce():
    lam = 1.0
    bundle = make_nocount(lam)
    g = bundle.graph
    bc = best_constant_guess(lam)
    # Independent check: brute force over every (length, string) pair.
    n_max = bundle.notes["n_max"]
    pmf = g.nodes["a"].cpd.rows[()]
    win = np.zeros(bc.n_max + 1)
    for n in range(1, n_max + 1):
        for s in range(2 ** n):
            win[bin(s).count("1")] += pmf[n - 1] / 2 ** n
    best_g = int(np.argmax(win))
    bound = bind(g, StrategyProfile({"x": best_g}))
    assert abs(exact_expected_payoffs(bound)[0] - win[best_g]) < 1e-12
    assert best_g == bc.g_star


@pytest.mark.parametrize("seed", range(20))
def test_exact_matches_reference_enumeration(seed):
    g = random_sbn(seed)
    for profile in enumerate_profiles(g):
        bound = bind(g, profile)
        got = exact_expected_payoffs(bound)
        want = reference_expected_payoffs(bound)
        assert np.abs(got - want).max() < 1e-12


@pytest.mark.parametrize("seed", [3, 17, 99])
def test_enumeration_visits_exactly_the_support(seed):
    g = random_sbn(seed)
    bound = bind(g, next(enumerate_profiles(g)))
    vals, probs, _ = enumerate_support(bound)
    assert len(vals) == reference_support_size(bound)
    assert probs.min() > 0.0
    assert abs(probs.sum() - 1.0) < 1e-9


def test_probability_conservation_rational():
    g = SbnGraph(1, {
        "a": ChanceSpec(Domain([0, 1, 2]),
                        TableCpd((), {(): (Fraction(1, 3), Fraction(1, 3),
                                           Fraction(1, 3))})),
        "pi": PayoffSpec(Domain([payoff_vector(0), payoff_vector(1)]), "all",
                         TableCpd(("a",), {(0,): (Fraction(1), Fraction(0)),
                                           (1,): (Fraction(0), Fraction(1)),
                                           (2,): (Fraction(1, 2),
                                                  Fraction(1, 2))})),
    }, exact=True)
    got = exact_expected_payoffs_rational(bind(g, StrategyProfile({})))
    assert got == (Fraction(1, 2),)
    approx = exact_expected_payoffs(bind(g, StrategyProfile({})))
    assert abs(approx[0] - 0.5) < 1e-15


def test_capacity_error_reports_bound():
    bundle = make_nocount(2.0)
    bound = bind(bundle.graph, StrategyProfile({"x": 0}))
    with pytest.raises(CapacityError) as err:
        exact_expected_payoffs(bound, max_support=10)
    assert err.value.bound > 10


def test_mc_point_mass_zero_stderr():
    bound = bind(point_mass_graph(), StrategyProfile({}))
    est = mc_expected_payoffs(bound, 100, 0)
    assert est.mean[0] == 7.0
    assert est.std_error[0] == 0.0


def test_mc_requires_two_samples(coin_graph):
    bound = bind(coin_graph, StrategyProfile({}))
    with pytest.raises(ContractError):
        mc_expected_payoffs(bound, 1, 0)


def test_mc_clt_bound(coin_graph):
    bound = bind(coin_graph, StrategyProfile({}))
    est = mc_expected_payoffs(bound, 100_000, 2024)
    assert abs(est.mean[0] - 0.5) <= 5 * est.std_error[0]
    assert abs(est.std_error[0] - 0.5 / math.sqrt(100_000)) < 1e-4


@pytest.mark.parametrize("seed", range(6))
def test_mc_within_five_stderr_of_exact(seed):
    g = random_sbn(seed + 50)
    bound = bind(g, next(enumerate_profiles(g)))
    exact = exact_expected_payoffs(bound)
    est = mc_expected_payoffs(bound, 20_000, seed)
    tol = 5 * est.std_error + 1e-12   # exact zero variance has zero s.e.
    assert (np.abs(est.mean - exact) <= tol).all()


def test_sample_is_first_mc_stream(coin_graph):
    bound = bind(coin_graph, StrategyProfile({}))
    est = mc_expected_payoffs(bound, 2, 777)
    one = sample(bound, 777)
    # sample() uses stream 0, i.e. the first Monte Carlo sample.
    first_two = [sample(bound, 777).payoffs[0],
                 est.mean[0] * 2 - sample(bound, 777).payoffs[0]]
    assert one.payoffs[0] == first_two[0]
    assert est.mean[0] == (first_two[0] + first_two[1]) / 2
