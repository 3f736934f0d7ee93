"""Lowering of a bound network into flat arrays for the evaluation kernels.

Every CPD becomes one of three lowered kinds over a feature-indexed row
space (row = sum_i feature_i(parent value) * stride_i):

  DENSE   - float table (n_rows, domain) plus its row-wise CDF for sampling
  DET     - int table (n_rows,) giving the point-mass domain index
  URANGE  - int tables lo/hi (n_rows,): uniform over domain[lo:hi)

Payoff nodes additionally carry a (domain, n_players) float matrix with the
payoff vector of each domain value. Node values are handled as domain
indices throughout; only the API boundary translates back to Values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .model import (
    BoundNetwork, Cpd, DeterministicCpd, Domain, FeatureTableCpd, PayoffSpec,
    PLAYER_ALL, TableCpd, UniformRangeCpd, topological_order,
)

KIND_DENSE = 0
KIND_DET = 1
KIND_URANGE = 2

# Dense tables above this many cells refuse to lower; generated games use
# feature CPDs precisely to stay far below it.
DENSE_CELL_CAP = 50_000_000


@dataclass
class CompiledNode:
    name: str
    kind: int
    domain_size: int
    parent_pos: np.ndarray      # positions in topo order, int64
    feat_flat: np.ndarray       # concatenated per-parent feature arrays
    feat_off: np.ndarray        # len(parents)+1 offsets into feat_flat
    strides: np.ndarray         # int64, one per parent
    payload: dict               # shared lowering cache of the source CPD
    payoff_rows: np.ndarray | None  # payoff nodes: (d, n_players) float64

    @property
    def stochastic(self) -> bool:
        return self.kind != KIND_DET

    @property
    def table(self) -> np.ndarray | None:
        return self.payload.get("table")

    @property
    def det(self) -> np.ndarray | None:
        return self.payload.get("det")

    @property
    def lo(self) -> np.ndarray | None:
        return self.payload.get("lo")

    @property
    def hi(self) -> np.ndarray | None:
        return self.payload.get("hi")

    def cdf(self) -> np.ndarray:
        """Row-wise CDF of the dense table, computed once and cached."""
        if "cdf" not in self.payload:
            self.payload["cdf"] = np.cumsum(self.payload["table"], axis=1)
        return self.payload["cdf"]


@dataclass
class CompiledNetwork:
    order: list[str]
    nodes: list[CompiledNode]
    n_players: int
    domains: list[Domain]

    def position(self, name: str) -> int:
        return self.order.index(name)


def _dense_from_table(cpd: TableCpd, parent_domains, domain) -> np.ndarray:
    sizes = [len(d) for d in parent_domains]
    n_rows = int(np.prod(sizes, dtype=np.int64)) if sizes else 1
    if n_rows * len(domain) > DENSE_CELL_CAP:
        raise CapacityError(
            f"dense CPD table would need {n_rows * len(domain)} cells",
            bound=n_rows * len(domain))
    table = np.zeros((n_rows, len(domain)))
    strides = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    for key, probs in cpd.rows.items():
        r = 0
        for v, d, s in zip(key, parent_domains, strides):
            r += d.index(v) * s
        table[r] = [float(p) for p in probs]
    return table


def _lower_cpd(cpd: Cpd, parent_domains, domain):
    """Returns (kind, feat arrays, strides, payload dict), cached on the CPD.

    CPDs are immutable by convention, and chance/payoff CPDs are shared by
    every bound profile of the same graph, so caching avoids re-lowering
    large tables once per profile.
    """
    tag = (tuple(len(d) for d in parent_domains), len(domain))
    cached = getattr(cpd, "_lowered", None)
    if cached is not None and cached[0] == tag:
        return cached[1]
    if isinstance(cpd, TableCpd):
        feats = [np.arange(len(d), dtype=np.int64) for d in parent_domains]
        sizes = [len(d) for d in parent_domains]
        payload = {"table": _dense_from_table(cpd, parent_domains, domain)}
        kind = KIND_DENSE
    else:
        feats = [f.array(d).astype(np.int64)
                 for f, d in zip(cpd.features, parent_domains)]
        sizes = [f.size for f in cpd.features]
        if isinstance(cpd, FeatureTableCpd):
            kind, payload = KIND_DENSE, {"table": cpd.table}
        elif isinstance(cpd, DeterministicCpd):
            kind, payload = KIND_DET, {"det": cpd.values}
        elif isinstance(cpd, UniformRangeCpd):
            kind, payload = KIND_URANGE, {"lo": cpd.lo, "hi": cpd.hi}
        else:
            raise TypeError(f"cannot lower CPD of type {type(cpd).__name__}")
    strides = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    lowered = (kind, feats, strides, payload)
    cpd._lowered = (tag, lowered)
    return lowered


def _payoff_rows(spec: PayoffSpec, n_players: int) -> np.ndarray:
    rows = np.zeros((len(spec.domain), n_players))
    for i, value in enumerate(spec.domain):
        if spec.owner == PLAYER_ALL:
            rows[i] = [float(e) for e in value]
        else:
            rows[i, spec.owner] = float(value[0])
    return rows


def compile_network(bound: BoundNetwork) -> CompiledNetwork:
    """Flatten a bound network into topo-ordered array form."""
    graph = bound.graph
    order = topological_order(graph)
    pos = {n: i for i, n in enumerate(order)}
    nodes = []
    for name in order:
        spec = graph.nodes[name]
        cpd = bound.resolved[name]
        pdoms = [graph.nodes[p].domain for p in cpd.parents]
        kind, feats, strides, payload = _lower_cpd(cpd, pdoms, spec.domain)
        if "feat_flat" not in payload:
            feat_off = np.zeros(len(feats) + 1, dtype=np.int64)
            for i, f in enumerate(feats):
                feat_off[i + 1] = feat_off[i] + len(f)
            payload["feat_flat"] = (np.concatenate(feats) if feats
                                    else np.zeros(0, dtype=np.int64))
            payload["feat_off"] = feat_off
        nodes.append(CompiledNode(
            name=name,
            kind=kind,
            domain_size=len(spec.domain),
            parent_pos=np.array([pos[p] for p in cpd.parents], dtype=np.int64),
            feat_flat=payload["feat_flat"],
            feat_off=payload["feat_off"],
            strides=strides,
            payload=payload,
            payoff_rows=(_payoff_rows(spec, graph.n_players)
                         if isinstance(spec, PayoffSpec) else None),
        ))
    return CompiledNetwork(order=order, nodes=nodes,
                           n_players=graph.n_players,
                           domains=[graph.nodes[n].domain for n in order])
