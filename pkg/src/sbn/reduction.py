"""Reduction of an SBN to an extensive-form game tree.

The tree has one tier of decision nodes per strategic node (in a caller
chosen tier order), so every path through the tiers fixes a complete
strategy profile. Below each tier leaf the bound Bayesian network unfolds
into chance nodes in depth order.

A node whose resolved distribution is a point mass for every parent
assignment contributes no chance node: its value is determined, so the
unfolding passes through it. Every other node materializes a chance node
branching over its full domain, zero-probability branches included, which
keeps node counts structural; the payoff evaluator skips zero branches
numerically.

Information sets group decision nodes of the same strategic node whose
paths agree on all actions previously taken by the owning player; other
players' moves are invisible, own moves are perfectly recalled.

Node-count recurrence (checked by traversal in the tests): with tier
branch counts m_1..m_T, and beta_u = |D_u| for materialized nodes and 1
for pass-through nodes under a given profile,

    decisions   = sum_t prod_{s<t} m_s
    tier leaves = prod_t m_t
    chance      = sum over tier-leaf profiles P of
                    sum_{materialized u} prod_{v before u} beta_v(P)
    leaves      = sum over P of prod_u beta_u(P)

The source material's claim of 1 + prod_u |D_u| nodes does not match this
tiered construction; both numbers are reported by the CLI, and only the
recurrence above is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import CapacityError, ContractError
from .model import (
    Cpd, SbnGraph, StrategicSpec, StrategyProfile, UniformRangeCpd, Value,
    _is_point_mass, bind, combine_payoffs, require_valid, topological_order,
)

DEFAULT_MAX_TREE_NODES = 2_000_000


@dataclass
class DecisionNode:
    player: int
    source: str
    info_set: str
    branches: list  # of (action index, TreeNode)


@dataclass
class ChanceNode:
    source: str
    branches: list  # of (Value, probability, TreeNode)


@dataclass
class Leaf:
    payoffs: tuple


TreeNode = Union[DecisionNode, ChanceNode, Leaf]


@dataclass
class ExtensiveTree:
    root: TreeNode
    n_players: int
    tier_order: list[str]
    info_sets: dict[str, list] = field(default_factory=dict)


def info_set_id(source: str, own_actions: tuple[int, ...]) -> str:
    return f"{source}#{'.'.join(map(str, own_actions))}"


def _materialized(cpd: Cpd) -> bool:
    """Whether this CPD unfolds as a chance node (any stochastic row)."""
    return not _is_point_mass(cpd)


def _tier_decisions(graph: SbnGraph, tier_order: list[str]) -> int:
    m = [len(graph.nodes[r].family) for r in tier_order]
    return sum(math.prod(m[:t]) for t in range(len(m)))


def predicted_node_counts(graph: SbnGraph,
                          tier_order: list[str] | None = None
                          ) -> tuple[int, int, int]:
    """(decision, chance, leaf) counts from the recurrence in the module
    docstring, without building the tree."""
    require_valid(graph)
    if tier_order is None:
        tier_order = sorted(graph.strategic_ids())
    order = topological_order(graph)
    decisions = _tier_decisions(graph, tier_order)
    chance = leaves = 0
    from .model import enumerate_profiles
    for profile in enumerate_profiles(graph):
        bound = bind(graph, profile)
        width = 1
        for name in order:
            if _materialized(bound.resolved[name]):
                chance += width
                width *= len(graph.nodes[name].domain)
        leaves += width
    return decisions, chance, leaves


def paper_formula_node_count(graph: SbnGraph) -> int:
    """The source material's 1 + prod of domain sizes, for comparison only."""
    return 1 + math.prod(len(s.domain) for s in graph.nodes.values())


def to_extensive_form(graph: SbnGraph, tier_order: list[str] | None = None,
                      max_nodes: int = DEFAULT_MAX_TREE_NODES) -> ExtensiveTree:
    """Unfold an SBN into its extensive form.

    tier_order must be a permutation of the strategic node ids; the default
    is id order. The resulting expected payoffs do not depend on it (play
    is simultaneous), which the tests assert.
    """
    require_valid(graph)
    strategic = sorted(graph.strategic_ids())
    if tier_order is None:
        tier_order = list(strategic)
    if sorted(tier_order) != strategic:
        raise ContractError(f"tier_order {tier_order} is not a permutation "
                            f"of the strategic nodes {strategic}")
    order = topological_order(graph)
    tree = ExtensiveTree(root=None, n_players=graph.n_players,
                         tier_order=list(tier_order))
    built = 0

    def bump(n: int = 1):
        nonlocal built
        built += n
        if built > max_nodes:
            raise CapacityError(f"tree exceeds {max_nodes} nodes",
                                bound=built)

    def build_tier(t: int, choices: dict[str, int]) -> TreeNode:
        if t == len(tier_order):
            bound = bind(graph, StrategyProfile(dict(choices)))
            return build_chance(0, {}, bound)
        source = tier_order[t]
        player = graph.nodes[source].owner
        own = tuple(choices[r] for r in tier_order[:t]
                    if graph.nodes[r].owner == player)
        iset = info_set_id(source, own)
        bump()
        node = DecisionNode(player=player, source=source, info_set=iset,
                            branches=[])
        tree.info_sets.setdefault(iset, []).append(node)
        for a in range(len(graph.nodes[source].family)):
            choices[source] = a
            node.branches.append((a, build_tier(t + 1, choices)))
        del choices[source]
        return node

    def build_chance(i: int, assignment: dict[str, Value], bound) -> TreeNode:
        if i == len(order):
            payoff_values = {n: assignment[n] for n in graph.payoff_ids()}
            pv = combine_payoffs(graph, payoff_values)
            bump()
            return Leaf(payoffs=tuple(pv.tolist()))
        name = order[i]
        spec = graph.nodes[name]
        cpd = bound.resolved[name]
        parent_values = [assignment[p] for p in cpd.parents]
        row = cpd.row(parent_values, graph.parent_domains(name), spec.domain)
        if not _materialized(cpd):
            # Fully deterministic node: its value is forced, pass through.
            assignment[name] = spec.domain[int(np.argmax(row))]
            child = build_chance(i + 1, assignment, bound)
            assignment.pop(name, None)
            return child
        bump()
        node = ChanceNode(source=name, branches=[])
        for value, p in zip(spec.domain, row):
            assignment[name] = value
            node.branches.append((value, float(p),
                                  build_chance(i + 1, assignment, bound)))
        assignment.pop(name, None)
        return node

    tree.root = build_tier(0, {})
    return tree


def tree_expected_payoffs(tree: ExtensiveTree,
                          profile: StrategyProfile) -> np.ndarray:
    """Expected payoff per player when play follows `profile`.

    Decision nodes follow the profile's action for their source node;
    chance nodes take expectation, skipping zero-probability branches.
    """

    def walk(node: TreeNode) -> np.ndarray:
        if isinstance(node, Leaf):
            return np.asarray(node.payoffs)
        if isinstance(node, DecisionNode):
            choice = profile.choices[node.source]
            for a, child in node.branches:
                if a == choice:
                    return walk(child)
            raise ContractError(f"profile picks action {choice} at "
                                f"{node.source!r}, which has no branch")
        out = np.zeros(tree.n_players)
        for _, p, child in node.branches:
            if p > 0.0:
                out += p * walk(child)
        return out

    return walk(tree.root)


def count_tree_nodes(tree: ExtensiveTree) -> tuple[int, int, int]:
    """(decision_count, chance_count, leaf_count) by traversal."""
    decision = chance = leaf = 0
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            leaf += 1
        elif isinstance(node, DecisionNode):
            decision += 1
            stack.extend(child for _, child in node.branches)
        else:
            chance += 1
            stack.extend(child for _, _, child in node.branches)
    return decision, chance, leaf


def export_tree(tree: ExtensiveTree) -> dict:
    """Tree as a JSON-ready dict (node kinds, branches, info-set ids)."""
    from .serialize import _value_to_json

    def conv(node: TreeNode) -> dict:
        if isinstance(node, Leaf):
            return {"kind": "leaf", "payoffs": list(node.payoffs)}
        if isinstance(node, DecisionNode):
            return {"kind": "decision", "player": node.player,
                    "source": node.source, "info_set": node.info_set,
                    "branches": [{"action": a, "child": conv(c)}
                                 for a, c in node.branches]}
        return {"kind": "chance", "source": node.source,
                "branches": [{"value": _value_to_json(v), "p": p,
                              "child": conv(c)}
                             for v, p, c in node.branches]}

    return {"n_players": tree.n_players,
            "tier_order": tree.tier_order,
            "info_sets": {k: len(v) for k, v in tree.info_sets.items()},
            "root": conv(tree.root)}
