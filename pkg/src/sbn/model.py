"""Core data model for strategic Bayesian networks.

A strategic Bayesian network (SBN) is a DAG whose nodes are partitioned into
chance nodes (fixed conditional distributions), strategic nodes (a player
picks the conditional distribution from a finite family of actions) and
payoff nodes (their sampled values award utility). Binding one action per
strategic node turns the SBN into an ordinary Bayesian network that can be
sampled or enumerated.

Values are integers, string symbols, or payoff vectors. Payoff vectors are
tuples of `fractions.Fraction` so that fixed-point payoffs (e.g. a split
prize of 0.5) are stored exactly; they are converted to floats only at
evaluation time.

Conditional distributions come in two flavours. `TableCpd` lists an explicit
probability row for every combination of parent values and is the JSON
interchange form. The feature-based CPDs (`FeatureTableCpd`,
`DeterministicCpd`, `UniformRangeCpd`) first map each parent value through a
small feature index and store one row per feature combination; they describe
the same dense table implicitly and keep large generated games (domains with
10^5 values) in a few megabytes.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import BindingError, CapacityError, StructuralError

Value = Union[int, str, tuple]

NORMALIZATION_TOL = 1e-12

PLAYER_ALL = "all"


def to_fraction(x) -> Fraction:
    """Convert ints, decimal strings, 'p/q' strings and floats to Fraction.

    Floats go through their shortest repr, so 0.1 becomes exactly 1/10
    rather than the binary approximation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a payoff entry")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact number")


def payoff_vector(*entries) -> tuple[Fraction, ...]:
    """Build an exact payoff vector value from numbers or strings."""
    return tuple(to_fraction(e) for e in entries)


class Domain:
    """Ordered set of values a node can take. Order indexes CPD columns."""

    __slots__ = ("values", "_index")

    def __init__(self, values: Iterable[Value]):
        self.values: tuple[Value, ...] = tuple(values)
        self._index: dict[Value, int] = {v: i for i, v in enumerate(self.values)}

    def index(self, value: Value) -> int:
        return self._index[value]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Value]:
        return iter(self.values)

    def __getitem__(self, i: int) -> Value:
        return self.values[i]

    def __contains__(self, value: Value) -> bool:
        return value in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Domain) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self) -> str:
        if len(self.values) > 6:
            head = ", ".join(repr(v) for v in self.values[:4])
            return f"Domain([{head}, ... {len(self.values)} values])"
        return f"Domain({list(self.values)!r})"


@dataclass(frozen=True)
class Feature:
    """Compresses a parent's values onto a small index range.

    `by_index[i]` is the feature of the parent's i-th domain value; None
    means the identity (the feature is the domain index itself and `size`
    must equal the parent's domain size at validation time).
    """

    size: int
    by_index: np.ndarray | None = None

    def array(self, parent_domain: Domain) -> np.ndarray:
        if self.by_index is None:
            return np.arange(len(parent_domain), dtype=np.int64)
        return self.by_index

    def __eq__(self, other):
        if not isinstance(other, Feature):
            return NotImplemented
        if self.size != other.size:
            return False
        a, b = self.by_index, other.by_index
        if a is None or b is None:
            return a is None and b is None
        return np.array_equal(a, b)


def identity_features(parent_domains: Sequence[Domain]) -> tuple[Feature, ...]:
    return tuple(Feature(len(d)) for d in parent_domains)


def _strides(sizes: Sequence[int]) -> tuple[int, ...]:
    # Row-major: last parent varies fastest.
    out = [1] * len(sizes)
    for i in range(len(sizes) - 2, -1, -1):
        out[i] = out[i + 1] * sizes[i + 1]
    return tuple(out)


class Cpd:
    """Conditional distribution of one node given its parents (abstract)."""

    parents: tuple[str, ...]

    def row(self, parent_values: Sequence[Value], parent_domains: Sequence[Domain],
            domain: Domain) -> np.ndarray:
        """Probability vector over `domain` for one parent assignment."""
        raise NotImplementedError

    def row_exact(self, parent_values, parent_domains, domain) -> tuple[Fraction, ...]:
        """Like row() but as exact rationals (floats are lifted exactly)."""
        return tuple(Fraction(p) if not isinstance(p, Fraction) else p
                     for p in self.row(parent_values, parent_domains, domain))

    def n_assignments(self, parent_domains: Sequence[Domain]) -> int:
        return math.prod(len(d) for d in parent_domains)

    def check(self, parent_domains: Sequence[Domain], domain: Domain,
              exact: bool) -> list[str]:
        """Local consistency problems, as human-readable strings."""
        raise NotImplementedError

    def materialize(self, parent_domains: Sequence[Domain], domain: Domain,
                    cap: int = 100_000) -> "TableCpd":
        """Expand into an explicit TableCpd (used for JSON interchange)."""
        n = self.n_assignments(parent_domains)
        if n > cap:
            raise CapacityError(
                f"CPD has {n} parent assignments, above the materialization cap {cap}",
                bound=n)
        rows = {}
        for combo in itertools.product(*[d.values for d in parent_domains]):
            rows[combo] = tuple(self.row(combo, parent_domains, domain).tolist())
        return TableCpd(self.parents, rows)


class TableCpd(Cpd):
    """Explicit CPD: one probability row per combination of parent values.

    Probabilities may be floats or Fractions; a graph with exact=True
    requires Fractions summing to exactly 1.
    """

    def __init__(self, parents: Sequence[str],
                 rows: Mapping[tuple, Sequence[float | Fraction]]):
        self.parents = tuple(parents)
        self.rows = {tuple(k): tuple(v) for k, v in rows.items()}

    def row(self, parent_values, parent_domains, domain) -> np.ndarray:
        return np.array([float(p) for p in self.rows[tuple(parent_values)]])

    def row_exact(self, parent_values, parent_domains, domain):
        return tuple(p if isinstance(p, Fraction) else Fraction(p)
                     for p in self.rows[tuple(parent_values)])

    def check(self, parent_domains, domain, exact) -> list[str]:
        problems = []
        expected = self.n_assignments(parent_domains)
        if len(self.rows) != expected:
            problems.append(
                f"incomplete CPD: {len(self.rows)} rows, expected {expected}")
        for key, probs in self.rows.items():
            if len(key) != len(self.parents):
                problems.append(f"row key {key!r} has wrong arity")
                continue
            if any(v not in d for v, d in zip(key, parent_domains)):
                problems.append(f"row key {key!r} not in parent domains")
                continue
            if len(probs) != len(domain):
                problems.append(f"row {key!r} has {len(probs)} entries, "
                                f"domain has {len(domain)}")
                continue
            if any(float(p) < 0 for p in probs):
                problems.append(f"row {key!r} has a negative probability")
            if exact:
                if not all(isinstance(p, Fraction) for p in probs):
                    problems.append(f"row {key!r} is not stored as rationals")
                elif sum(probs) != 1:
                    problems.append(f"row {key!r} does not sum to 1 exactly")
            elif abs(math.fsum(float(p) for p in probs) - 1.0) > NORMALIZATION_TOL:
                problems.append(f"row {key!r} does not sum to 1")
        return problems

    def is_point_mass(self) -> bool:
        return all(sum(1 for p in probs if float(p) > 0) == 1
                   for probs in self.rows.values())

    def __eq__(self, other):
        return (isinstance(other, TableCpd) and self.parents == other.parents
                and self.rows == other.rows)


class _FeatureBasedCpd(Cpd):
    """Shared machinery for CPDs whose rows are indexed by parent features."""

    features: tuple[Feature, ...]

    def __init__(self, parents: Sequence[str], features: Sequence[Feature]):
        self.parents = tuple(parents)
        self.features = tuple(features)
        if len(self.features) != len(self.parents):
            raise ValueError("one feature per parent required")
        self._stride = _strides([f.size for f in self.features])

    @property
    def n_rows(self) -> int:
        return math.prod(f.size for f in self.features)

    def _row_index(self, parent_values, parent_domains) -> int:
        idx = 0
        for v, d, f, s in zip(parent_values, parent_domains, self.features, self._stride):
            di = d.index(v)
            idx += int(f.array(d)[di]) * s
        return idx

    def _check_features(self, parent_domains) -> list[str]:
        problems = []
        for name, f, d in zip(self.parents, self.features, parent_domains):
            if f.by_index is None:
                if f.size != len(d):
                    problems.append(
                        f"identity feature for parent {name!r} declares size "
                        f"{f.size}, domain has {len(d)}")
            else:
                if len(f.by_index) != len(d):
                    problems.append(
                        f"feature for parent {name!r} covers {len(f.by_index)} "
                        f"values, domain has {len(d)}")
                elif len(f.by_index) and (f.by_index.min() < 0
                                          or f.by_index.max() >= f.size):
                    problems.append(f"feature for parent {name!r} escapes its range")
        return problems


class FeatureTableCpd(_FeatureBasedCpd):
    """Stochastic CPD with one dense probability row per feature combination."""

    def __init__(self, parents, features, table: np.ndarray):
        super().__init__(parents, features)
        self.table = np.asarray(table, dtype=np.float64)

    def row(self, parent_values, parent_domains, domain) -> np.ndarray:
        return self.table[self._row_index(parent_values, parent_domains)]

    def check(self, parent_domains, domain, exact) -> list[str]:
        problems = self._check_features(parent_domains)
        if exact:
            problems.append("feature-table CPD cannot be stored as rationals")
        if self.table.shape != (self.n_rows, len(domain)):
            problems.append(
                f"table shape {self.table.shape} != ({self.n_rows}, {len(domain)})")
            return problems
        if (self.table < 0).any():
            problems.append("table has a negative probability")
        bad = np.abs(self.table.sum(axis=1) - 1.0) > NORMALIZATION_TOL
        if bad.any():
            problems.append(f"{int(bad.sum())} table rows do not sum to 1")
        return problems

    def __eq__(self, other):
        return (isinstance(other, FeatureTableCpd) and self.parents == other.parents
                and self.features == other.features
                and np.array_equal(self.table, other.table))


class DeterministicCpd(_FeatureBasedCpd):
    """Point-mass CPD: each feature combination selects one domain value."""

    def __init__(self, parents, features, values: np.ndarray):
        super().__init__(parents, features)
        self.values = np.asarray(values, dtype=np.int64)

    def row(self, parent_values, parent_domains, domain) -> np.ndarray:
        out = np.zeros(len(domain))
        out[self.values[self._row_index(parent_values, parent_domains)]] = 1.0
        return out

    def row_exact(self, parent_values, parent_domains, domain):
        row = [Fraction(0)] * len(domain)
        row[int(self.values[self._row_index(parent_values, parent_domains)])] = Fraction(1)
        return tuple(row)

    def check(self, parent_domains, domain, exact) -> list[str]:
        problems = self._check_features(parent_domains)
        if self.values.shape != (self.n_rows,):
            problems.append(f"value table shape {self.values.shape} != ({self.n_rows},)")
            return problems
        if len(self.values) and (self.values.min() < 0
                                 or self.values.max() >= len(domain)):
            problems.append("a deterministic value index escapes the domain")
        return problems

    def __eq__(self, other):
        return (isinstance(other, DeterministicCpd) and self.parents == other.parents
                and self.features == other.features
                and np.array_equal(self.values, other.values))


class UniformRangeCpd(_FeatureBasedCpd):
    """Uniform distribution over a contiguous index range of the domain.

    Used for 'draw a uniformly random bit string of length n': the strings
    of each length occupy a contiguous slice of the canonically ordered
    domain, so two small integer arrays replace a table with 2^n columns.
    """

    def __init__(self, parents, features, lo: np.ndarray, hi: np.ndarray):
        super().__init__(parents, features)
        self.lo = np.asarray(lo, dtype=np.int64)
        self.hi = np.asarray(hi, dtype=np.int64)

    def row(self, parent_values, parent_domains, domain) -> np.ndarray:
        r = self._row_index(parent_values, parent_domains)
        out = np.zeros(len(domain))
        out[self.lo[r]:self.hi[r]] = 1.0 / (self.hi[r] - self.lo[r])
        return out

    def row_exact(self, parent_values, parent_domains, domain):
        r = self._row_index(parent_values, parent_domains)
        n = int(self.hi[r] - self.lo[r])
        row = [Fraction(0)] * len(domain)
        for i in range(self.lo[r], self.hi[r]):
            row[i] = Fraction(1, n)
        return tuple(row)

    def check(self, parent_domains, domain, exact) -> list[str]:
        problems = self._check_features(parent_domains)
        if self.lo.shape != (self.n_rows,) or self.hi.shape != (self.n_rows,):
            problems.append("lo/hi arrays do not match the feature row count")
            return problems
        if ((self.lo < 0) | (self.hi <= self.lo) | (self.hi > len(domain))).any():
            problems.append("a uniform range is empty or escapes the domain")
        return problems

    def __eq__(self, other):
        return (isinstance(other, UniformRangeCpd) and self.parents == other.parents
                and self.features == other.features
                and np.array_equal(self.lo, other.lo)
                and np.array_equal(self.hi, other.hi))


@dataclass(frozen=True)
class StrategyFamily:
    """The action set of one strategic node: a named list of labelled CPDs.

    All member CPDs must share the same parent list. A family flagged
    deterministic may only contain point-mass rows.
    """

    name: str
    strategies: tuple  # of (label, Cpd)
    deterministic: bool = False

    def __len__(self) -> int:
        return len(self.strategies)

    def labels(self) -> list[str]:
        return [label for label, _ in self.strategies]

    def cpd(self, index: int) -> Cpd:
        return self.strategies[index][1]

    def index_of(self, label: str) -> int:
        for i, (lab, _) in enumerate(self.strategies):
            if lab == label:
                return i
        raise KeyError(label)


@dataclass(frozen=True)
class ChanceSpec:
    domain: Domain
    cpd: Cpd


@dataclass(frozen=True)
class StrategicSpec:
    domain: Domain
    owner: int
    family: StrategyFamily


@dataclass(frozen=True)
class PayoffSpec:
    """Payoff node. owner is a player index or "all" for the elided tuple node.

    Domain values are payoff vectors: length n_players for an "all" node,
    length 1 for a per-player node.
    """

    domain: Domain
    owner: int | str
    cpd: Cpd


NodeSpec = Union[ChanceSpec, StrategicSpec, PayoffSpec]


@dataclass
class SbnGraph:
    """A strategic Bayesian network. Treat as immutable after construction.

    `exact` switches probability storage to rationals (TableCpd with
    Fraction entries only); the exact enumeration path then produces
    Fraction results with no rounding at all.
    """

    n_players: int
    nodes: dict[str, NodeSpec]
    exact: bool = False

    def parents_of(self, name: str) -> tuple[str, ...]:
        spec = self.nodes[name]
        if isinstance(spec, StrategicSpec):
            return spec.family.strategies[0][1].parents if spec.family.strategies else ()
        return spec.cpd.parents

    def children_map(self) -> dict[str, list[str]]:
        children: dict[str, list[str]] = {name: [] for name in self.nodes}
        for name in self.nodes:
            for p in self.parents_of(name):
                if p in children:
                    children[p].append(name)
        return children

    def chance_ids(self) -> list[str]:
        return [n for n, s in self.nodes.items() if isinstance(s, ChanceSpec)]

    def strategic_ids(self) -> list[str]:
        return [n for n, s in self.nodes.items() if isinstance(s, StrategicSpec)]

    def payoff_ids(self) -> list[str]:
        return [n for n, s in self.nodes.items() if isinstance(s, PayoffSpec)]

    def domain(self, name: str) -> Domain:
        return self.nodes[name].domain

    def parent_domains(self, name: str) -> list[Domain]:
        return [self.nodes[p].domain for p in self.parents_of(name)]


@dataclass(frozen=True)
class StrategyProfile:
    """One chosen action index per strategic node."""

    choices: Mapping[str, int]

    def __getitem__(self, node: str) -> int:
        return self.choices[node]


@dataclass(frozen=True)
class BoundNetwork:
    """An SBN with every strategic node resolved to one concrete CPD."""

    graph: SbnGraph
    profile: StrategyProfile
    resolved: Mapping[str, Cpd]


@dataclass(frozen=True)
class Violation:
    code: str
    node: str | None
    message: str

    def __str__(self) -> str:
        where = f" [{self.node}]" if self.node else ""
        return f"{self.code}{where}: {self.message}"


def _payoff_violations(graph: SbnGraph) -> list[Violation]:
    out = []
    elided = [n for n in graph.payoff_ids()
              if graph.nodes[n].owner == PLAYER_ALL]
    per_player = [n for n in graph.payoff_ids()
                  if graph.nodes[n].owner != PLAYER_ALL]
    if elided and per_player:
        out.append(Violation("payoff-structure", None,
                             "mix of elided and per-player payoff nodes"))
    elif elided:
        if len(elided) != 1:
            out.append(Violation("payoff-structure", None,
                                 f"{len(elided)} elided payoff nodes, expected 1"))
    else:
        owners = sorted(graph.nodes[n].owner for n in per_player)
        if owners != list(range(graph.n_players)):
            out.append(Violation("payoff-structure", None,
                                 f"per-player payoff owners {owners} do not cover "
                                 f"players 0..{graph.n_players - 1} exactly once"))
    for n in graph.payoff_ids():
        spec = graph.nodes[n]
        want = graph.n_players if spec.owner == PLAYER_ALL else 1
        for v in spec.domain:
            if not (isinstance(v, tuple) and len(v) == want
                    and all(isinstance(e, Fraction) for e in v)):
                out.append(Violation("payoff-domain", n,
                                     f"value {v!r} is not a payoff vector of "
                                     f"length {want}"))
                break
    return out


def validate(graph: SbnGraph) -> list[Violation]:
    """Check every structural invariant; an empty list means valid.

    Violations are data, not exceptions: callers that require validity
    use require_valid().
    """
    out: list[Violation] = []
    if graph.n_players < 1:
        out.append(Violation("players", None, "n_players must be >= 1"))
    if not graph.nodes:
        out.append(Violation("empty", None, "graph has no nodes"))

    for name, spec in graph.nodes.items():
        if len(spec.domain) == 0:
            out.append(Violation("domain", name, "empty domain"))
        elif len(spec.domain._index) != len(spec.domain):
            out.append(Violation("domain", name, "duplicate domain values"))

        if isinstance(spec, StrategicSpec):
            if not (0 <= spec.owner < graph.n_players):
                out.append(Violation("owner", name,
                                     f"owner {spec.owner} out of range"))
            if len(spec.family) == 0:
                out.append(Violation("empty-family", name,
                                     f"family {spec.family.name!r} has no strategies"))
            labels = spec.family.labels()
            if len(set(labels)) != len(labels):
                out.append(Violation("family-labels", name, "duplicate strategy labels"))
            parent_lists = {cpd.parents for _, cpd in spec.family.strategies}
            if len(parent_lists) > 1:
                out.append(Violation("family-parents", name,
                                     "strategies disagree on the parent list"))
        elif isinstance(spec, PayoffSpec):
            if spec.owner != PLAYER_ALL and not (0 <= spec.owner < graph.n_players):
                out.append(Violation("owner", name, f"owner {spec.owner} out of range"))

    out.extend(_payoff_violations(graph))

    # Parent references, CPD consistency.
    for name, spec in graph.nodes.items():
        cpds = ([("", spec.cpd)] if not isinstance(spec, StrategicSpec)
                else [(lab, cpd) for lab, cpd in spec.family.strategies])
        for label, cpd in cpds:
            unknown = [p for p in cpd.parents if p not in graph.nodes]
            if unknown:
                out.append(Violation("unknown-parent", name,
                                     f"parents {unknown} are not declared nodes"))
                continue
            pdoms = [graph.nodes[p].domain for p in cpd.parents]
            for problem in cpd.check(pdoms, spec.domain, graph.exact):
                tag = f"strategy {label!r}: " if label else ""
                out.append(Violation("bad-cpd", name, tag + problem))
            if (isinstance(spec, StrategicSpec) and spec.family.deterministic
                    and not _is_point_mass(cpd)):
                out.append(Violation("not-deterministic", name,
                                     f"strategy {label!r} is not a point mass"))

    # Payoff nodes must be sinks; edges must form a DAG.
    children = None
    if not any(v.code == "unknown-parent" for v in out):
        children = graph.children_map()
        for n in graph.payoff_ids():
            if children[n]:
                out.append(Violation("payoff-child", n,
                                     f"payoff node has children {children[n]}"))
        if _has_cycle(graph):
            out.append(Violation("cycle", None, "edge relation contains a cycle"))
    return out


def _is_point_mass(cpd: Cpd) -> bool:
    """Whether every row of the CPD is a point mass."""
    if isinstance(cpd, DeterministicCpd):
        return True
    if isinstance(cpd, TableCpd):
        return cpd.is_point_mass()
    if isinstance(cpd, FeatureTableCpd):
        return bool(((cpd.table > 0).sum(axis=1) == 1).all())
    if isinstance(cpd, UniformRangeCpd):
        return bool((cpd.hi - cpd.lo == 1).all())
    return False


def _has_cycle(graph: SbnGraph) -> bool:
    indeg = {n: len(graph.parents_of(n)) for n in graph.nodes}
    queue = [n for n, d in indeg.items() if d == 0]
    seen = 0
    children = graph.children_map()
    while queue:
        n = queue.pop()
        seen += 1
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen != len(graph.nodes)


def require_valid(graph: SbnGraph) -> None:
    violations = validate(graph)
    if violations:
        raise StructuralError("invalid graph: "
                              + "; ".join(str(v) for v in violations[:10]))


def topological_order(graph: SbnGraph) -> list[str]:
    """Depth order: parents first, ties broken by node id (deterministic)."""
    indeg = {n: len(graph.parents_of(n)) for n in graph.nodes}
    children = graph.children_map()
    ready = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != len(graph.nodes):
        raise StructuralError("edge relation contains a cycle")
    return order


def bind(graph: SbnGraph, profile: StrategyProfile) -> BoundNetwork:
    """Fix one action per strategic node, yielding a classic Bayes network."""
    resolved: dict[str, Cpd] = {}
    for name, spec in graph.nodes.items():
        if isinstance(spec, StrategicSpec):
            if name not in profile.choices:
                raise BindingError(f"{name} unbound")
            idx = profile.choices[name]
            if not (0 <= idx < len(spec.family)):
                raise BindingError(
                    f"{name}: choice {idx} out of range for family of "
                    f"size {len(spec.family)}")
            resolved[name] = spec.family.cpd(idx)
        else:
            resolved[name] = spec.cpd
    extra = set(profile.choices) - set(graph.strategic_ids())
    if extra:
        raise BindingError(f"profile names non-strategic nodes: {sorted(extra)}")
    return BoundNetwork(graph, profile, resolved)


def enumerate_profiles(graph: SbnGraph) -> Iterator[StrategyProfile]:
    """All complete profiles, lexicographic in (node id, action index)."""
    names = sorted(graph.strategic_ids())
    ranges = [range(len(graph.nodes[n].family)) for n in names]
    for combo in itertools.product(*ranges):
        yield StrategyProfile(dict(zip(names, combo)))


def profile_count(graph: SbnGraph) -> int:
    return math.prod(len(graph.nodes[n].family) for n in graph.strategic_ids())


def combine_payoffs(graph: SbnGraph, payoff_values: Mapping[str, Value]) -> np.ndarray:
    """Per-player float payoffs from the sampled payoff node values."""
    out = np.zeros(graph.n_players)
    for name, value in payoff_values.items():
        spec = graph.nodes[name]
        if spec.owner == PLAYER_ALL:
            out += np.array([float(e) for e in value])
        else:
            out[spec.owner] += float(value[0])
    return out


def combine_payoffs_exact(graph: SbnGraph,
                          payoff_values: Mapping[str, Value]) -> list[Fraction]:
    out = [Fraction(0)] * graph.n_players
    for name, value in payoff_values.items():
        spec = graph.nodes[name]
        if spec.owner == PLAYER_ALL:
            for i, e in enumerate(value):
                out[i] += e
        else:
            out[spec.owner] += value[0]
    return out
