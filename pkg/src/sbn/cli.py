"""Command-line experiment runner.

Subcommands build the example games, evaluate them exactly or by Monte
Carlo, solve matrix games, and write reproducible tables. Every output
file starts with a metadata header (tool version, full configuration,
seed) and contains nothing volatile, so re-running a command reproduces
the file byte for byte.

Exit codes: 0 success, 2 usage or validation error, 3 capacity error,
4 internal invariant failure. The enumeration cap defaults to 2,000,000
joint outcomes and can be overridden with SBN_MAX_SUPPORT.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, rng, serialize
from .errors import (
    BindingError, CapacityError, ContractError, FormatError, InternalError,
    StructuralError,
)
from .games import (
    best_constant_guess, best_response_failures, gen_pool, make_letsplay,
    make_nocount, make_two_player_nocount, NASH_MEMBER,
)
from .inference import exact_expected_payoffs, mc_expected_payoffs
from .model import StrategyProfile, bind, require_valid, validate
from .reduction import (
    count_tree_nodes, export_tree, paper_formula_node_count,
    predicted_node_counts, to_extensive_form,
)
from .solver import best_response, induced_normal_form, solution_to_json, zero_sum_solve


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def write_table(path: str | None, fmt: str, meta: dict, columns: list[str],
                rows: list[list]) -> None:
    """Emit a table as RFC-4180 CSV (with '#' metadata records) or JSON."""
    if fmt == "json":
        doc = {"meta": {k: (repr(v) if isinstance(v, float) else v)
                        for k, v in meta.items()},
               "columns": columns,
               "rows": [[_fmt(c) for c in row] for row in rows]}
        _write_text(path, json.dumps(doc, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    for k, v in meta.items():
        writer.writerow([f"# {k}={_fmt(v)}"])
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(c) for c in row])
    _write_text(path, buf.getvalue())


def _meta(args, command: str, **extra) -> dict:
    meta = {"tool": f"sbn {__version__}", "command": command}
    meta.update(extra)
    return meta


def _maybe_emit_sbn(args, graph) -> None:
    if getattr(args, "emit_sbn", None):
        _write_text(args.emit_sbn, serialize.dumps(graph) + "\n")


def cmd_nocount(args) -> None:
    bc = best_constant_guess(args.lam, args.tail_tol, args.g_max,
                             args.n_cap, args.cap_mode)
    meta = _meta(args, "nocount", **{"lambda": args.lam},
                 tail_tol=args.tail_tol, g_max=args.g_max or bc.n_max,
                 n_cap=args.n_cap, cap_mode=args.cap_mode)
    rows = [[g, float(p)] for g, p in enumerate(bc.table)]
    rows += [["g_star", bc.g_star],
             ["g_star_win_prob", bc.win_prob],
             ["round_half_inv_lambda", bc.conjectured],
             ["conjecture_matches", bc.g_star == bc.conjectured],
             ["n_max", bc.n_max],
             ["tail_mass", bc.tail_mass]]
    write_table(args.out, args.format, meta, ["g", "win_prob"], rows)
    if args.emit_sbn:
        bundle = make_nocount(args.lam, args.tail_tol, args.g_max,
                              args.n_cap, args.cap_mode)
        _maybe_emit_sbn(args, bundle.graph)


def cmd_asymmetry(args) -> None:
    bundle = make_two_player_nocount(args.lam, args.tail_tol, args.g_max,
                                     args.n_cap, args.cap_mode)
    _maybe_emit_sbn(args, bundle.graph)
    bc = best_constant_guess(args.lam, args.tail_tol, args.g_max,
                             args.n_cap, args.cap_mode)
    game = induced_normal_form(bundle.graph)
    x_labels = [lab[0][1] for lab in game.strategy_labels[0]]
    y_fam = bundle.graph.nodes["y"].family
    y_labels = [y_fam.labels()[lab[0][1]] for lab in game.strategy_labels[1]]
    counter_idx = y_fam.index_of("counter")

    rows: list[list] = [["payoff", x_labels[i], y_labels[j],
                         float(game.tensor[i, j, 0]), float(game.tensor[i, j, 1])]
                        for i in range(game.shape[0])
                        for j in range(game.shape[1])]
    focal = game.tensor[bc.g_star, counter_idx]
    ties_x, vx = best_response(game, 0, [None, counter_idx])
    ties_y, vy = best_response(game, 1, [bc.g_star, None])
    rows += [
        ["focal", f"constant-{bc.g_star}", "counter",
         float(focal[0]), float(focal[1])],
        ["gap_y_minus_x", "", "", float(focal[1] - focal[0]), ""],
        ["best_response_x_vs_counter", x_labels[ties_x[0]], "", vx, ""],
        ["best_response_y_vs_g_star", "", y_labels[ties_y[0]], "", vy],
        ["n_max", bc.n_max, "", "", ""],
        ["tail_mass", bc.tail_mass, "", "", ""],
    ]
    if args.mc:
        if args.seed is None:
            raise ContractError("--mc requires --seed")
        y_counter = y_fam.index_of("counter")
        est = mc_expected_payoffs(
            bind(bundle.graph, StrategyProfile({"x": bc.g_star,
                                                "y": y_counter})),
            args.mc, args.seed)
        rows.append(["focal_mc", "", "", float(est.mean[0]), float(est.mean[1])])
        rows.append(["focal_mc_se", "", "", float(est.std_error[0]),
                     float(est.std_error[1])])
    meta = _meta(args, "asymmetry", **{"lambda": args.lam},
                 tail_tol=args.tail_tol, g_max=args.g_max or bc.n_max,
                 n_cap=args.n_cap, cap_mode=args.cap_mode,
                 seed=args.seed, mc=args.mc)
    write_table(args.out, args.format, meta,
                ["row", "x_strategy", "y_strategy", "payoff_x", "payoff_y"],
                rows)


def cmd_letsplay(args) -> None:
    if args.seed is None:
        raise ContractError("letsplay requires --seed")
    b_members = tuple(m.strip() for m in args.b_members.split(",") if m.strip())
    if not b_members:
        raise ContractError("need at least one B family member")
    pool = gen_pool(args.pool_size, args.n_min, args.n_max, args.decimals,
                    args.seed)
    weights = np.full(len(pool), 1.0 / len(pool))
    bundle = make_letsplay(pool, weights, (NASH_MEMBER,), b_members)
    _maybe_emit_sbn(args, bundle.graph)
    graph = bundle.graph
    sb = graph.nodes["Sb"].family

    rows = []
    for mi, member in enumerate(b_members):
        table = sb.cpd(mi).table
        bound = bind(graph, StrategyProfile({"Sa": 0, "Sb": mi}))
        exact = exact_expected_payoffs(bound)
        est = mc_expected_payoffs(bound, args.n_mc,
                                  rng.stream_state(args.seed, 1_000_000 + mi))
        fails = best_response_failures(pool, table)
        rows.append([member,
                     float(exact[0]), float(exact[1]),
                     float(est.mean[0]), float(est.mean[1]),
                     float(est.std_error[0]), float(est.std_error[1]),
                     sum(fails),
                     ";".join(str(i) for i, f in enumerate(fails) if f)])
    for gi, g in enumerate(pool):
        rows.append([f"subgame-{gi}", g.n, "", "", "", "", "", "", ""])
    meta = _meta(args, "letsplay", pool_size=args.pool_size,
                 n_min=args.n_min, n_max=args.n_max, decimals=args.decimals,
                 seed=args.seed, b_members=args.b_members, n_mc=args.n_mc)
    write_table(args.out, args.format, meta,
                ["member", "exact_a", "exact_b", "mc_a", "mc_b",
                 "se_a", "se_b", "n_flagged", "flagged_subgames"], rows)


def cmd_reduce(args) -> None:
    graph = serialize.loads(Path(args.sbn_file).read_text(encoding="utf-8"))
    violations = validate(graph)
    if violations:
        raise StructuralError("; ".join(str(v) for v in violations))
    tree = to_extensive_form(graph, max_nodes=args.max_nodes)
    counts = count_tree_nodes(tree)
    predicted = predicted_node_counts(graph)
    doc = export_tree(tree)
    doc["meta"] = dict(_meta(args, "reduce", sbn_file=args.sbn_file))
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    print(f"decision_nodes={counts[0]} chance_nodes={counts[1]} "
          f"leaves={counts[2]}")
    print(f"recurrence_counts={predicted}")
    print(f"one_plus_domain_product={paper_formula_node_count(graph)} "
          f"(reported for comparison, not asserted)")


def cmd_solve_zs(args) -> None:
    try:
        matrix = json.loads(Path(args.matrix_file).read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        raise
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2:
        raise FormatError("matrix file must hold a JSON array of arrays")
    sol = zero_sum_solve(arr)
    if args.format == "csv":
        rows = [["value", sol.value, ""], ["duality_gap", sol.duality_gap, ""]]
        rows += [["strategy", i, float(p)]
                 for i, p in enumerate(sol.strategy.probs)]
        rows += [["certificate", j, float(c)]
                 for j, c in enumerate(sol.certificate)]
        write_table(args.out, "csv", _meta(args, "solve-zs",
                                           matrix_file=args.matrix_file),
                    ["field", "index", "value"], rows)
    else:
        doc = {"meta": dict(_meta(args, "solve-zs",
                                  matrix_file=args.matrix_file))}
        doc.update(solution_to_json(sol))
        _write_text(args.out, json.dumps(doc, indent=2) + "\n")


def _add_common(p: argparse.ArgumentParser, default_format="csv") -> None:
    p.add_argument("--out", default=None, metavar="PATH",
                   help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--seed", type=int, default=None, metavar="U64")


def _add_nocount_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="rate of the length distribution (default 1.0)")
    p.add_argument("--tail-tol", type=float, default=1e-6,
                   help="truncation tail tolerance (default 1e-6)")
    p.add_argument("--g-max", type=int, default=None,
                   help="largest constant guess (default: n_max)")
    p.add_argument("--n-cap", type=int, default=20,
                   help="hard cap on the string length (default 20)")
    p.add_argument("--cap-mode", choices=("error", "truncate"),
                   default="error",
                   help="what to do when tail-tol needs more than n-cap")
    p.add_argument("--emit-sbn", metavar="PATH", default=None,
                   help="also write the constructed SBN as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbn",
        description="Strategic Bayesian network games: build, evaluate, solve.")
    parser.add_argument("--version", action="version",
                        version=f"sbn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nocount", help="constant-guess win table and argmax")
    _add_nocount_params(p)
    _add_common(p)
    p.set_defaults(func=cmd_nocount)

    p = sub.add_parser("asymmetry",
                       help="two-player guessing game bimatrix and payoff gap")
    _add_nocount_params(p)
    p.add_argument("--mc", type=int, default=None, metavar="N",
                   help="add a Monte Carlo estimate of the focal profile")
    _add_common(p)
    p.set_defaults(func=cmd_asymmetry)

    p = sub.add_parser("letsplay",
                       help="subgame-pool game: equilibrium player vs others")
    p.add_argument("--pool-size", type=int, default=5)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--decimals", type=int, default=2)
    p.add_argument("--b-members", default="uniform,pure-0,br-to-uniform",
                   help="comma-separated B family members (no lp-nash)")
    p.add_argument("--n-mc", type=int, default=100_000)
    p.add_argument("--emit-sbn", metavar="PATH", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_letsplay)

    p = sub.add_parser("reduce", help="unfold an SBN file to extensive form")
    p.add_argument("sbn_file")
    p.add_argument("--max-nodes", type=int, default=2_000_000)
    _add_common(p, default_format="json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve-zs",
                       help="solve a zero-sum matrix game from a JSON file")
    p.add_argument("matrix_file")
    _add_common(p, default_format="json")
    p.set_defaults(func=cmd_solve_zs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ContractError, FormatError, StructuralError, BindingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column "
              f"{exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
