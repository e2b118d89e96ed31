"""Command-line front end.

Every subcommand reads the canonical JSON formats (network ``{"n", "table"}``,
schedule ``{"blocks"}``) and writes one JSON object with ``--format json`` or
tab-delimited ``key<TAB>value`` lines otherwise.  Exit status is 0 on success,
1 on domain errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .coloring import (
    Coloring,
    InvalidColoring,
    exact_chromatic_number,
    greedy_color_by_degree,
    max_clique_generic,
    max_clique_necc,
)
from .confusability import (
    DEFAULT_MAX_N,
    ResourceLimitError,
    build_inecc_graph,
    build_necc_graph,
)
from .core import BooleanNetwork, NetworkError, UpdateSchedule, to_string
from .generators import KINDS, SCHEDULE_KINDS, GeneratorSpec
from .synthesis import SynthesisResult, extract_coloring, kappa, synthesize, verify_bundle

log = logging.getLogger("sbansim")

EXACT_MAX_N = 12


def _default_budget() -> int:
    raw = os.environ.get("SBANSIM_BUDGET")
    return int(raw) if raw else 10**7


class DomainError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise DomainError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"{path} is not valid JSON: {e}") from None


def load_instance(path: str, schedule_path: str | None = None) -> tuple[BooleanNetwork, UpdateSchedule]:
    """An instance file ``{"network", "schedule"}`` or a bare network plus a schedule file."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "network" in obj:
        F = BooleanNetwork.from_json(obj["network"])
        sched = obj.get("schedule")
    else:
        F = BooleanNetwork.from_json(obj)
        sched = None
    if schedule_path is not None:
        sched = _read_json(schedule_path)
    if sched is None:
        raise DomainError("no schedule given: the instance has no 'schedule' field and --schedule is absent")
    return F, UpdateSchedule.from_json(sched, F.n)


def _emit(args, payload: dict, table: list[tuple[str, object]] | None = None) -> None:
    if args.format == "json":
        text = json.dumps(payload)
    else:
        rows = table if table is not None else [(k, v) for k, v in payload.items()]
        text = "\n".join(
            f"{k}\t{json.dumps(v) if isinstance(v, (list, dict)) else v}" for k, v in rows
        )
    out = getattr(args, "output", None)
    if out and args.command != "gen":
        Path(out).write_text(json.dumps(payload, indent=1) + "\n")
    print(text)


def _write(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.kind, args.n, args.seed, args.schedule)
    F, W = spec.build(args.max_n)
    payload = {"network": F.to_json(), "schedule": W.to_json(), "spec": spec.to_json()}
    if args.output:
        _write(args.output, payload)
        print(f"wrote\t{args.output}" if args.format != "json" else json.dumps({"wrote": args.output}))
    else:
        print(json.dumps(payload))
    return 0


def _graphs(args, F, W):
    necc = build_necc_graph(F, W, args.max_n, annotate=getattr(args, "annotate", False))
    return necc, (build_inecc_graph(F, W, args.max_n, necc=necc) if args.quotient else None)


def cmd_graph(args) -> int:
    F, W = load_instance(args.input, args.schedule)
    necc, inecc = _graphs(args, F, W)
    g = inecc if inecc is not None else necc
    payload = g.to_json()
    labels = [g.label(v) for v in range(g.num_nodes)]
    payload["labels"] = labels
    if args.dot:
        Path(args.dot).write_text(inecc.to_dot() if inecc is not None else necc.to_dot(args.annotate))
    if args.plot:
        from .plotting import plot_graph

        colors = greedy_color_by_degree(g).colors if args.color else None
        title = "INECC graph" if inecc is not None else "NECC graph"
        plot_graph(labels, g.edges, args.plot, colors=colors, title=title, hide_isolated=inecc is None)
    table = [
        ("graph", "inecc" if inecc is not None else "necc"),
        ("nodes", g.num_nodes),
        ("edges", g.num_edges),
    ]
    table += [("edge", f"{labels[u]}-{labels[v]}") for u, v in g.edges.tolist()]
    _emit(args, payload, table)
    return 0


def cmd_chromatic(args) -> int:
    F, W = load_instance(args.input, args.schedule)
    if F.n > args.max_n:
        raise ResourceLimitError(f"n={F.n} exceeds the exact-coloring cap of {args.max_n}")
    necc, inecc = _graphs(args, F, W)
    if inecc is not None:
        res = exact_chromatic_number(inecc, args.budget)
    else:
        res = exact_chromatic_number(necc, args.budget, clique=max_clique_necc(F, W)[1])
    payload = {"graph": "inecc" if inecc is not None else "necc", **res.to_json()}
    table = [
        ("graph", payload["graph"]),
        ("chi", res.value if res.exact else f"[{res.lower},{res.upper}]"),
        ("exact", res.exact),
        ("budget_used", res.budget_used),
    ]
    _emit(args, payload, table)
    return 0


def cmd_clique(args) -> int:
    F, W = load_instance(args.input, args.schedule)
    if args.generic:
        size, witness = max_clique_generic(build_necc_graph(F, W, args.max_n))
        method = "bron-kerbosch"
    else:
        size, witness = max_clique_necc(F, W)
        method = "step-buckets"
    payload = {"omega": size, "witness": witness, "method": method}
    table = [("omega", size), ("method", method), ("witness", " ".join(to_string(x, F.n) for x in witness))]
    _emit(args, payload, table)
    return 0


def cmd_kappa(args) -> int:
    F, W = load_instance(args.input, args.schedule)
    if F.n > args.max_n:
        raise ResourceLimitError(f"n={F.n} exceeds the exact-coloring cap of {args.max_n}")
    res = kappa(F, W, budget=args.budget, max_n=args.max_n)
    payload = res.to_json(include_witness=False)
    if args.bundle and res.witness is not None:
        _write(args.bundle, _bundle_json(res.witness, F, W))
        payload["bundle"] = args.bundle
    kv = res.value if res.exact else f"[{res.lower},{res.upper}]"
    table = [
        ("kappa", kv),
        ("exact", res.exact),
        ("chi", res.chromatic.value if res.chromatic.exact else f"[{res.chromatic.lower},{res.chromatic.upper}]"),
        ("omega", res.clique_size),
        ("witness_verified", res.verified),
    ]
    _emit(args, payload, table)
    if args.format != "json":
        print(f"κ = {kv}", file=sys.stderr)
    return 0


def _bundle_json(res: SynthesisResult, F: BooleanNetwork, W: UpdateSchedule) -> dict:
    return {**res.to_json(), "F": F.to_json(), "W": W.to_json()}


def cmd_synthesize(args) -> int:
    F, W = load_instance(args.input, args.schedule)
    necc = build_necc_graph(F, W, args.max_n)
    if args.coloring:
        coloring = Coloring.from_json(_read_json(args.coloring))
    elif args.greedy:
        coloring = greedy_color_by_degree(necc)
    else:
        coloring = exact_chromatic_number(necc, args.budget, clique=max_clique_necc(F, W)[1]).coloring
    res = synthesize(F, W, coloring, necc)
    bundle = _bundle_json(res, F, W)
    if args.output:
        _write(args.output, bundle)
    ext, ok, _ = verify_bundle(res, F, W)
    if args.format == "json" and not args.output:
        print(json.dumps(bundle))
    else:
        _emit_rows(args, {"k": res.k, "m": res.Fp.n, "colors": coloring.count, "verified": ext and ok,
                          "bundle": args.output})
    return 0


def _emit_rows(args, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print("\n".join(f"{k}\t{v}" for k, v in payload.items()))


def cmd_verify(args) -> int:
    obj = _read_json(args.bundle)
    if not isinstance(obj, dict):
        raise DomainError("bundle JSON must be an object")
    res = SynthesisResult.from_json(obj)
    if args.instance:
        F, W = load_instance(args.instance, args.schedule)
    else:
        if "F" not in obj or "W" not in obj:
            raise DomainError("bundle has no source network 'F'/'W'; pass --instance")
        F = BooleanNetwork.from_json(obj["F"])
        W = UpdateSchedule.from_json(obj["W"], F.n)
    ext, ok, check = verify_bundle(res, F, W)
    payload = {
        "status": "pass" if ext and ok else "fail",
        "extension_ok": ext,
        "simulation_ok": ok,
        "states_checked": res.Fp.size,
        "counterexample": check.counterexample,
        "expected": check.expected,
        "got": check.got,
    }
    if ok and args.extract:
        col = extract_coloring(res.Fp, res.Wp, res.h, F, W, check=False)
        payload["extracted_colors"] = col.count
    if args.output:
        _write(args.output, payload)
    _emit_rows(args, payload)
    return 0


def cmd_search(args) -> int:
    from .search import search_worst_kappa

    report = search_worst_kappa(
        args.n,
        args.strategy,
        args.budget_instances,
        args.seed,
        chi_budget=args.budget,
        prune_schedules=args.prune,
        include_swap=not args.no_swap,
        bijective=args.bijective,
        stratify=args.stratify,
        threads=args.threads,
        checkpoint=args.checkpoint,
        checkpoint_every=args.checkpoint_every,
        counterexample_path=args.counterexamples,
    )
    payload = report.to_json()
    if args.output:
        _write(args.output, payload)
    if args.plot:
        from .plotting import plot_kappa_histogram

        plot_kappa_histogram(report, args.plot)
    table = [
        ("n", report.n),
        ("strategy", report.strategy),
        ("instances", report.instances),
        ("complete", report.complete),
        ("worst_kappa", report.worst_kappa if report.worst_exact else f"[{report.worst_lower},{report.worst_upper}]"),
        ("conjecture_status", report.conjecture_status),
        ("histogram", json.dumps(dict(sorted(report.kappa_histogram.items())))),
    ]
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print("\n".join(f"{k}\t{v}" for k, v in table))
    return 0


def cmd_export(args) -> int:
    F, W = load_instance(args.input, args.schedule)
    necc, inecc = _graphs(args, F, W)
    if inecc is not None:
        colors = greedy_color_by_degree(inecc).colors if args.color else None
        dot = inecc.to_dot(colors)
    else:
        colors = None
        if args.color:
            colors = exact_chromatic_number(necc, args.budget, clique=max_clique_necc(F, W)[1]).coloring.colors
        dot = necc.to_dot(args.annotate, colors)
    if args.output:
        Path(args.output).write_text(dot)
    else:
        sys.stdout.write(dot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--budget", type=int, default=_default_budget(),
                        help="branch-node expansions for exact coloring (env SBANSIM_BUDGET)")
    common.add_argument("-v", "--verbose", action="store_true")

    def graph_cap(p, default):
        p.add_argument("--max-n", type=int, default=default)

    def instance(p):
        p.add_argument("input", help="instance JSON ({network, schedule}) or network JSON")
        p.add_argument("--schedule", help="schedule JSON file, overrides the instance's schedule")

    parser = argparse.ArgumentParser(prog="sbansim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="emit a named or random instance")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--schedule", choices=SCHEDULE_KINDS, default="sequential")
    p.add_argument("-o", "--output")
    graph_cap(p, DEFAULT_MAX_N)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("graph", parents=[common], help="NECC (or INECC with --quotient) adjacency")
    instance(p)
    p.add_argument("--quotient", action="store_true")
    p.add_argument("--annotate", action="store_true", help="label DOT edges with confusable steps")
    p.add_argument("--dot")
    p.add_argument("--plot", help="render the graph to an image file")
    p.add_argument("--color", action="store_true", help="fill plotted nodes by greedy coloring")
    p.add_argument("-o", "--output")
    graph_cap(p, DEFAULT_MAX_N)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("chromatic", parents=[common], help="exact chromatic number or bounds")
    instance(p)
    p.add_argument("--quotient", action="store_true")
    p.add_argument("-o", "--output")
    graph_cap(p, EXACT_MAX_N)
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("clique", parents=[common], help="clique number of the NECC graph")
    instance(p)
    p.add_argument("--generic", action="store_true", help="use Bron–Kerbosch instead of step buckets")
    p.add_argument("-o", "--output")
    graph_cap(p, DEFAULT_MAX_N)
    p.set_defaults(func=cmd_clique)

    p = sub.add_parser("kappa", parents=[common], help="number of added automata, with witness")
    instance(p)
    p.add_argument("--bundle", help="write the witness simulator bundle here")
    p.add_argument("-o", "--output")
    graph_cap(p, EXACT_MAX_N)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("synthesize", parents=[common], help="build a simulator bundle from a coloring")
    instance(p)
    p.add_argument("--coloring", help="coloring JSON; default is an exact minimum coloring")
    p.add_argument("--greedy", action="store_true", help="use the greedy coloring instead")
    p.add_argument("-o", "--output")
    graph_cap(p, DEFAULT_MAX_N)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", parents=[common], help="exhaustively check a simulator bundle")
    p.add_argument("bundle")
    p.add_argument("--instance", help="source instance, when the bundle does not embed it")
    p.add_argument("--schedule")
    p.add_argument("--extract", action="store_true", help="also read a coloring back from the bundle")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="worst-case κ over size-n SBANs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("exhaustive", "random"), default="random")
    p.add_argument("--instances", dest="budget_instances", type=int, default=10_000,
                   help="instances to examine (0 = all, exhaustive only)")
    prune = p.add_mutually_exclusive_group()
    prune.add_argument("--prune", dest="prune", action="store_true", default=None,
                       help="enumerate only the simple sequential schedule")
    prune.add_argument("--no-prune", dest="prune", action="store_false")
    p.add_argument("--no-swap", action="store_true", help="do not seed the sample with the swap network")
    p.add_argument("--bijective", action="store_true")
    p.add_argument("--stratify", action="store_true", help="cycle the block count across samples")
    p.add_argument("--checkpoint")
    p.add_argument("--checkpoint-every", type=int, default=1000)
    p.add_argument("--counterexamples", help="file receiving any conjecture counterexample")
    p.add_argument("--plot", help="write a κ histogram figure")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("export", parents=[common], help="DOT rendering of the NECC/INECC graph")
    instance(p)
    p.add_argument("--quotient", action="store_true")
    p.add_argument("--annotate", action="store_true")
    p.add_argument("--color", action="store_true")
    p.add_argument("-o", "--output")
    graph_cap(p, DEFAULT_MAX_N)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if hasattr(args, "threads") and args.threads < 1:
        parser.error("--threads must be at least 1")
    if hasattr(args, "budget") and args.budget < 1:
        parser.error("--budget must be positive")
    try:
        return args.func(args)
    except (DomainError, NetworkError, ResourceLimitError, InvalidColoring, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
