"""JSON interchange format for SBN descriptions.

Document layout::

    {"players": 2,
     "exact": false,                      # optional, default false
     "nodes": [
       {"id": "a", "kind": "chance", "domain": [1, 2], "parents": [],
        "cpd": [{"given": [], "p": [0.5, 0.5]}]},
       {"id": "x", "kind": "strategic", "domain": [0, 1], "parents": ["a"],
        "owner": 0,
        "family": {"name": "guesses", "deterministic": true,
                   "strategies": [{"label": "zero", "cpd": [...]}, ...]}},
       {"id": "pi", "kind": "payoff", "domain": [[0], [1]], "owner": "all",
        "parents": ["a", "x"], "cpd": [...]}]}

Domain entries are integers, strings (symbols), or arrays (payoff
vectors). Payoff entries and probabilities may be written as numbers or as
exact strings such as "1/2" or "0.25"; exact graphs serialize all
probabilities as fraction strings. Unknown fields are rejected.

Serialization always writes explicit CPD rows, so implicitly represented
CPDs (feature tables, uniform ranges) are materialized; graphs whose
tables would exceed the cap refuse to serialize.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import FormatError
from .model import (
    ChanceSpec, Cpd, Domain, PayoffSpec, PLAYER_ALL, SbnGraph, StrategicSpec,
    StrategyFamily, TableCpd, to_fraction,
)

MATERIALIZE_CAP = 100_000


def _frac_to_json(f: Fraction):
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def _value_to_json(v):
    if isinstance(v, tuple):
        return [_frac_to_json(e) for e in v]
    return v


def _value_from_json(j, where: str):
    if isinstance(j, bool):
        raise FormatError(f"{where}: booleans are not values")
    if isinstance(j, int):
        return j
    if isinstance(j, str):
        return j
    if isinstance(j, list):
        try:
            return tuple(to_fraction(e) for e in j)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{where}: bad payoff vector {j!r}: {exc}") from None
    raise FormatError(f"{where}: {j!r} is not an integer, symbol or payoff vector")


def _prob_to_json(p):
    if isinstance(p, Fraction):
        return _frac_to_json(p)
    return float(p)


def _prob_from_json(j, where: str):
    if isinstance(j, bool):
        raise FormatError(f"{where}: booleans are not probabilities")
    if isinstance(j, (int, float)):
        return float(j)
    if isinstance(j, str):
        try:
            return Fraction(j)
        except ValueError:
            raise FormatError(f"{where}: bad probability {j!r}") from None
    raise FormatError(f"{where}: bad probability {j!r}")


def _require_keys(obj: dict, required: set[str], optional: set[str], where: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise FormatError(f"{where}: missing fields {sorted(missing)}")
    if unknown:
        raise FormatError(f"{where}: unknown fields {sorted(unknown)}")


def _cpd_to_json(cpd: Cpd, parent_domains, domain) -> list:
    table = (cpd if isinstance(cpd, TableCpd)
             else cpd.materialize(parent_domains, domain, cap=MATERIALIZE_CAP))
    return [{"given": [_value_to_json(v) for v in key],
             "p": [_prob_to_json(p) for p in probs]}
            for key, probs in table.rows.items()]


def _cpd_from_json(rows, parents, where: str) -> TableCpd:
    if not isinstance(rows, list):
        raise FormatError(f"{where}: cpd must be an array of rows")
    out = {}
    for i, row in enumerate(rows):
        _require_keys(row, {"given", "p"}, set(), f"{where} row {i}")
        given = row["given"]
        if not isinstance(given, list) or len(given) != len(parents):
            raise FormatError(f"{where} row {i}: 'given' must list one value "
                              f"per parent ({len(parents)})")
        key = tuple(_value_from_json(v, f"{where} row {i}") for v in given)
        if key in out:
            raise FormatError(f"{where} row {i}: duplicate parent assignment")
        if not isinstance(row["p"], list):
            raise FormatError(f"{where} row {i}: 'p' must be an array")
        out[key] = tuple(_prob_from_json(p, f"{where} row {i}") for p in row["p"])
    return TableCpd(parents, out)


def serialize(graph: SbnGraph) -> dict:
    """Graph as a JSON-ready dict; implicit CPDs are expanded to rows."""
    nodes = []
    for name, spec in graph.nodes.items():
        entry: dict = {"id": name,
                       "kind": {ChanceSpec: "chance", StrategicSpec: "strategic",
                                PayoffSpec: "payoff"}[type(spec)],
                       "domain": [_value_to_json(v) for v in spec.domain],
                       "parents": list(graph.parents_of(name))}
        pdoms = graph.parent_domains(name)
        if isinstance(spec, StrategicSpec):
            entry["owner"] = spec.owner
            fam: dict = {"name": spec.family.name,
                         "strategies": [
                             {"label": label,
                              "cpd": _cpd_to_json(cpd, pdoms, spec.domain)}
                             for label, cpd in spec.family.strategies]}
            if spec.family.deterministic:
                fam["deterministic"] = True
            entry["family"] = fam
        else:
            if isinstance(spec, PayoffSpec):
                entry["owner"] = spec.owner
            entry["cpd"] = _cpd_to_json(spec.cpd, pdoms, spec.domain)
        nodes.append(entry)
    doc = {"players": graph.n_players, "nodes": nodes}
    if graph.exact:
        doc["exact"] = True
    return doc


def dumps(graph: SbnGraph, indent: int | None = 2) -> str:
    return json.dumps(serialize(graph), indent=indent)


def parse(doc: dict) -> SbnGraph:
    """Strictly parse a JSON document into an SbnGraph (no validation)."""
    _require_keys(doc, {"players", "nodes"}, {"exact"}, "document")
    players = doc["players"]
    if not isinstance(players, int) or isinstance(players, bool) or players < 1:
        raise FormatError("document: 'players' must be a positive integer")
    exact = doc.get("exact", False)
    if not isinstance(exact, bool):
        raise FormatError("document: 'exact' must be a boolean")
    if not isinstance(doc["nodes"], list):
        raise FormatError("document: 'nodes' must be an array")

    nodes: dict[str, object] = {}
    for i, entry in enumerate(doc["nodes"]):
        where = f"node {i}"
        _require_keys(entry, {"id", "kind", "domain", "parents"},
                      {"cpd", "owner", "family"}, where)
        name = entry["id"]
        if not isinstance(name, str) or not name:
            raise FormatError(f"{where}: 'id' must be a non-empty string")
        if name in nodes:
            raise FormatError(f"{where}: duplicate id {name!r}")
        where = f"node {name!r}"
        kind = entry["kind"]
        if not isinstance(entry["parents"], list) or any(
                not isinstance(p, str) for p in entry["parents"]):
            raise FormatError(f"{where}: 'parents' must be an array of ids")
        parents = tuple(entry["parents"])
        domain = Domain(_value_from_json(v, f"{where} domain")
                        for v in entry["domain"])

        if kind == "chance":
            if "cpd" not in entry or "owner" in entry or "family" in entry:
                raise FormatError(f"{where}: chance nodes take exactly 'cpd'")
            nodes[name] = ChanceSpec(domain, _cpd_from_json(entry["cpd"],
                                                            parents, where))
        elif kind == "strategic":
            if "family" not in entry or "owner" not in entry or "cpd" in entry:
                raise FormatError(f"{where}: strategic nodes take 'owner' "
                                  f"and 'family'")
            owner = entry["owner"]
            if not isinstance(owner, int) or isinstance(owner, bool):
                raise FormatError(f"{where}: 'owner' must be an integer")
            fam = entry["family"]
            _require_keys(fam, {"name", "strategies"}, {"deterministic"},
                          f"{where} family")
            det = fam.get("deterministic", False)
            if not isinstance(det, bool):
                raise FormatError(f"{where}: 'deterministic' must be a boolean")
            if not isinstance(fam["strategies"], list):
                raise FormatError(f"{where}: 'strategies' must be an array")
            strategies = []
            for k, s in enumerate(fam["strategies"]):
                _require_keys(s, {"label", "cpd"}, set(),
                              f"{where} strategy {k}")
                if not isinstance(s["label"], str):
                    raise FormatError(f"{where} strategy {k}: label must be "
                                      f"a string")
                strategies.append((s["label"],
                                   _cpd_from_json(s["cpd"], parents,
                                                  f"{where} strategy {k}")))
            nodes[name] = StrategicSpec(domain, owner,
                                        StrategyFamily(fam["name"],
                                                       tuple(strategies), det))
        elif kind == "payoff":
            if "cpd" not in entry or "owner" not in entry or "family" in entry:
                raise FormatError(f"{where}: payoff nodes take 'owner' and 'cpd'")
            owner = entry["owner"]
            if owner != PLAYER_ALL and (not isinstance(owner, int)
                                        or isinstance(owner, bool)):
                raise FormatError(f"{where}: 'owner' must be an integer or "
                                  f"\"{PLAYER_ALL}\"")
            nodes[name] = PayoffSpec(domain, owner,
                                     _cpd_from_json(entry["cpd"], parents, where))
        else:
            raise FormatError(f"{where}: unknown kind {kind!r}")
    return SbnGraph(n_players=players, nodes=nodes, exact=exact)


def loads(text: str) -> SbnGraph:
    return parse(json.loads(text))
