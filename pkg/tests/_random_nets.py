"""Seeded generator of random small SBNs for property and acceptance tests."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from sbn.model import (
    ChanceSpec, Domain, PayoffSpec, SbnGraph, StrategicSpec, StrategyFamily,
    TableCpd, payoff_vector, validate,
)


def _random_row(rng: np.random.Generator, size: int) -> tuple[float, ...]:
    kind = rng.random()
    if kind < 0.2:
        row = np.zeros(size)
        row[rng.integers(size)] = 1.0
        return tuple(row)
    w = rng.random(size) ** 2
    if kind < 0.5 and size > 1:
        w[rng.integers(size)] = 0.0   # exercise zero-probability pruning
    if w.sum() == 0.0:
        w[0] = 1.0
    return tuple(w / w.sum())


def _random_cpd(rng, parents, parent_domains, size) -> TableCpd:
    rows = {}
    keys = [()]
    for d in parent_domains:
        keys = [k + (v,) for k in keys for v in d.values]
    for key in keys:
        rows[key] = _random_row(rng, size)
    return TableCpd(parents, rows)


def random_sbn(seed: int, max_chance: int = 3, max_strategic: int = 3,
               max_domain: int = 3, max_family: int = 3,
               max_players: int = 2) -> SbnGraph:
    """A random valid SBN within the given size bounds.

    Edges always point from earlier to later names, so the graph is
    acyclic by construction; payoff nodes come last and alternate between
    the elided tuple form and per-player nodes.
    """
    rng = np.random.default_rng(seed)
    n_players = int(rng.integers(1, max_players + 1))
    n_chance = int(rng.integers(1, max_chance + 1))
    n_strategic = int(rng.integers(0, max_strategic + 1))

    names = [f"c{i}" for i in range(n_chance)] + \
            [f"r{i}" for i in range(n_strategic)]
    rng.shuffle(names)
    domains = {n: Domain(range(int(rng.integers(1, max_domain + 1))))
               for n in names}

    def pick_parents(i: int) -> tuple[str, ...]:
        avail = names[:i]
        k = int(rng.integers(0, min(len(avail), 2) + 1))
        return tuple(sorted(rng.choice(avail, size=k, replace=False))) if k else ()

    nodes: dict[str, object] = {}
    for i, name in enumerate(names):
        parents = pick_parents(i)
        pdoms = [domains[p] for p in parents]
        size = len(domains[name])
        if name.startswith("c"):
            nodes[name] = ChanceSpec(domains[name],
                                     _random_cpd(rng, parents, pdoms, size))
        else:
            n_actions = int(rng.integers(1, max_family + 1))
            members = tuple(
                (f"act-{a}", _random_cpd(rng, parents, pdoms, size))
                for a in range(n_actions))
            owner = int(rng.integers(n_players))
            nodes[name] = StrategicSpec(domains[name], owner,
                                        StrategyFamily(f"family-{name}", members))

    parent_pool = list(names)
    payoff_levels = [Fraction(k, 2) for k in range(-2, 3)]

    def payoff_domain(width: int) -> Domain:
        k = int(rng.integers(2, 4))
        values = set()
        while len(values) < k:
            values.add(tuple(payoff_levels[rng.integers(len(payoff_levels))]
                             for _ in range(width)))
        return Domain(sorted(values))

    if n_players > 1 and rng.random() < 0.4:
        for p in range(n_players):
            name = f"u{p}"
            parents = tuple(sorted(
                rng.choice(parent_pool, size=min(2, len(parent_pool)),
                           replace=False)))
            dom = payoff_domain(1)
            nodes[name] = PayoffSpec(dom, p,
                                     _random_cpd(rng, parents,
                                                 [domains[q] for q in parents],
                                                 len(dom)))
    else:
        parents = tuple(sorted(
            rng.choice(parent_pool, size=min(2, len(parent_pool)),
                       replace=False)))
        dom = payoff_domain(n_players)
        nodes["pi"] = PayoffSpec(dom, "all",
                                 _random_cpd(rng, parents,
                                             [domains[q] for q in parents],
                                             len(dom)))

    graph = SbnGraph(n_players=n_players, nodes=nodes)
    problems = validate(graph)
    assert not problems, f"generator produced invalid graph: {problems}"
    return graph


def payoff_vector_domain():
    return Domain([payoff_vector(0), payoff_vector(1)])
