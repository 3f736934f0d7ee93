"""Evaluation of bound networks: sampling, exact expectation, Monte Carlo.

Exact expectation enumerates the joint support breadth-first in depth
order, keeping a frontier of (partial assignment, probability) pairs and
never materializing a zero-probability branch. Monte Carlo draws every
sample from its own counter-based stream (see rng), so results are a pure
function of (network, n_samples, seed) regardless of chunking.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .backends import get_backend
from .compiled import KIND_DENSE, KIND_DET, CompiledNetwork, compile_network
from .errors import CapacityError, ContractError, InternalError
from .model import (
    BoundNetwork, PayoffSpec, Value, combine_payoffs_exact, topological_order,
)

PROBABILITY_CONSERVATION_TOL = 1e-9


def default_max_support() -> int:
    """Enumeration cap: SBN_MAX_SUPPORT env var, or 2,000,000 outcomes."""
    raw = os.environ.get("SBN_MAX_SUPPORT", "")
    return int(raw) if raw else 2_000_000


@dataclass(frozen=True)
class WorldOutcome:
    """One play of the game: every node's value plus resulting payoffs."""

    assignment: dict[str, Value]
    payoffs: tuple[float, ...]


@dataclass(frozen=True)
class PayoffEstimate:
    """Monte Carlo estimate of expected payoffs with standard errors."""

    mean: np.ndarray
    std_error: np.ndarray
    n_samples: int
    seed: int


def _row_indices(B, node, vals):
    if len(node.parent_pos) == 0:
        return np.zeros(vals.shape[0], dtype=np.int64)
    return B.row_indices(vals, node.parent_pos, node.feat_flat,
                         node.feat_off, node.strides)


def enumerate_support(bound: BoundNetwork, max_support: int | None = None,
                      backend: str | None = None):
    """All positive-probability joint assignments of a bound network.

    Returns (values, probs, net): values is (k, n_nodes) int64 of domain
    indices in topo order, probs the joint probability of each row.
    """
    if max_support is None:
        max_support = default_max_support()
    net = compile_network(bound)
    B = get_backend(backend)
    vals = np.zeros((1, 0), dtype=np.int64)
    probs = np.ones(1)
    for node in net.nodes:
        ridx = _row_indices(B, node, vals)
        if node.kind == KIND_DET:
            cols = node.det[ridx]
            vals = np.concatenate([vals, cols[:, None]], axis=1)
            continue
        if node.kind == KIND_DENSE:
            if vals.shape[0] * node.domain_size > max_support:
                realized = B.count_dense_branches(ridx, node.table)
                if realized > max_support:
                    raise CapacityError(
                        f"enumeration needs at least {realized} outcomes at "
                        f"node {node.name!r}, cap is {max_support}",
                        bound=realized)
            rep, cols, probs = B.expand_dense(ridx, probs, node.table)
        else:
            realized = int((node.hi[ridx] - node.lo[ridx]).sum())
            if realized > max_support:
                raise CapacityError(
                    f"enumeration needs at least {realized} outcomes at "
                    f"node {node.name!r}, cap is {max_support}",
                    bound=realized)
            rep, cols, probs = B.expand_urange(ridx, probs, node.lo, node.hi)
        if len(rep) > max_support:
            raise CapacityError(
                f"enumeration needs {len(rep)} outcomes at node "
                f"{node.name!r}, cap is {max_support}", bound=len(rep))
        vals = np.concatenate([vals[rep], cols[:, None]], axis=1)
    return vals, probs, net


def _payoff_matrix(net: CompiledNetwork, vals: np.ndarray) -> np.ndarray:
    pay = np.zeros((vals.shape[0], net.n_players))
    for j, node in enumerate(net.nodes):
        if node.payoff_rows is not None:
            pay += node.payoff_rows[vals[:, j]]
    return pay


def exact_expected_payoffs(bound: BoundNetwork, max_support: int | None = None,
                           backend: str | None = None) -> np.ndarray:
    """Expected payoff per player by exact enumeration (no randomness)."""
    vals, probs, net = enumerate_support(bound, max_support, backend)
    total = probs.sum()
    if abs(total - 1.0) > PROBABILITY_CONSERVATION_TOL:
        raise InternalError(f"enumerated probability mass {total!r} != 1")
    pay = _payoff_matrix(net, vals)
    return (probs[:, None] * pay).sum(axis=0)


def exact_expected_payoffs_rational(bound: BoundNetwork,
                                    max_support: int | None = None
                                    ) -> tuple[Fraction, ...]:
    """Exact-rational expectation; no floating point anywhere.

    Intended for graphs built with exact=True (Fraction-valued CPDs);
    float probabilities are lifted to their exact binary rationals.
    """
    if max_support is None:
        max_support = default_max_support()
    graph = bound.graph
    order = topological_order(graph)
    payoff_names = [n for n in order if isinstance(graph.nodes[n], PayoffSpec)]
    totals = [Fraction(0)] * graph.n_players
    mass = Fraction(0)
    count = 0
    assignment: dict[str, Value] = {}

    def recurse(i: int, p: Fraction):
        nonlocal mass, count
        if i == len(order):
            count += 1
            if count > max_support:
                raise CapacityError(
                    f"enumeration exceeds {max_support} outcomes",
                    bound=count)
            mass += p
            pv = combine_payoffs_exact(
                graph, {n: assignment[n] for n in payoff_names})
            for j in range(graph.n_players):
                totals[j] += p * pv[j]
            return
        name = order[i]
        spec = graph.nodes[name]
        cpd = bound.resolved[name]
        parents = [assignment[q] for q in cpd.parents]
        pdoms = graph.parent_domains(name)
        row = cpd.row_exact(parents, pdoms, spec.domain)
        for value, q in zip(spec.domain, row):
            if q == 0:
                continue
            assignment[name] = value
            recurse(i + 1, p * q)
        assignment.pop(name, None)

    recurse(0, Fraction(1))
    if bound.graph.exact and mass != 1:
        raise InternalError(f"rational probability mass {mass} != 1")
    return tuple(totals)


def _sample_chunk(net: CompiledNetwork, B, seed: int, start: int, n: int):
    """Value indices (n, n_nodes) for samples start..start+n-1 of `seed`."""
    states = rng.stream_states(seed, start, n)
    vals = np.zeros((n, 0), dtype=np.int64)
    for node in net.nodes:
        ridx = _row_indices(B, node, vals)
        if node.kind == KIND_DET:
            cols = node.det[ridx]
        elif node.kind == KIND_DENSE:
            cols, states = B.draw_dense(states, ridx, node.table, node.cdf())
        else:
            cols, states = B.draw_urange(states, ridx, node.lo, node.hi)
        vals = np.concatenate([vals, cols[:, None]], axis=1)
    return vals


def sample(bound: BoundNetwork, seed: int) -> WorldOutcome:
    """Ancestral sampling of one play; equals sample 0 of mc with `seed`."""
    net = compile_network(bound)
    B = get_backend()
    vals = _sample_chunk(net, B, seed, 0, 1)
    assignment = {node.name: net.domains[j][int(vals[0, j])]
                  for j, node in enumerate(net.nodes)}
    payoffs = _payoff_matrix(net, vals)[0]
    return WorldOutcome(assignment=assignment, payoffs=tuple(payoffs.tolist()))


def mc_expected_payoffs(bound: BoundNetwork, n_samples: int, seed: int,
                        n_chunks: int = 1,
                        backend: str | None = None) -> PayoffEstimate:
    """Monte Carlo estimate over independent per-sample streams.

    The result is identical for every n_chunks (the chunking stands in for
    a worker count): sample i always uses stream mix(seed, i), and the
    estimator reduces the assembled sample matrix in fixed index order.
    """
    if n_samples < 2:
        raise ContractError("n_samples must be >= 2")
    net = compile_network(bound)
    B = get_backend(backend)
    samples = np.empty((n_samples, net.n_players))
    bounds = np.linspace(0, n_samples, n_chunks + 1).astype(int)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi > lo:
            vals = _sample_chunk(net, B, seed, int(lo), int(hi - lo))
            samples[lo:hi] = _payoff_matrix(net, vals)
    mean = samples.mean(axis=0)
    sd = samples.std(axis=0, ddof=1)
    return PayoffEstimate(mean=mean, std_error=sd / math.sqrt(n_samples),
                          n_samples=n_samples, seed=seed)
