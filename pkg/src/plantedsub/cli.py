"""Command-line entry point: ``plantedsub <command> ...``.

Exit codes: 0 success (``detect``: H0), 1 ``detect`` decided H1,
2 degenerate result or bad input, 3 a search hit its resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import detectors, harness, lowdegree, recovery
from .ensembles import PlantParams, sample, sample_null
from .errors import DomainError, InvalidArgument, ResourceLimitError
from .graphcore import format_graph, parse_graph, parse_planted, read_graph
from .structstats import structure_report

EXIT_OK, EXIT_H1, EXIT_DEGENERATE, EXIT_RESOURCE = 0, 1, 2, 3


def _emit(args, text: str, append: bool = False):
    if args.output:
        with open(args.output, "a" if append else "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(args, obj):
    _emit(args, json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _read_stdin_graph():
    return parse_graph(sys.stdin.read())


def parse_int_range(spec: str) -> list:
    """``5..40``, ``5..40:5``, ``2^10..2^20`` (powers of two) or ``10,20,40``."""
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        step = 1
        if ":" in hi:
            hi, st = hi.split(":", 1)
            step = int(st)
        if lo.startswith("2^") and hi.startswith("2^"):
            return [2**e for e in range(int(lo[2:]), int(hi[2:]) + 1, step)]
        return list(range(int(lo), int(hi) + 1, step))
    return [int(x) for x in spec.split(",") if x]


def parse_float_list(spec: str) -> list:
    return [float(x) for x in spec.split(",") if x]


# --- commands -------------------------------------------------------------------


def cmd_sample(args):
    if args.ensemble == "null":
        s = sample_null(args.n, args.q, args.seed)
    else:
        if not args.pattern:
            raise InvalidArgument(f"--pattern is required for the {args.ensemble} ensemble")
        params = PlantParams(args.n, args.q, read_graph(args.pattern), args.ensemble, args.seed)
        s = sample(params)
    planted = s.embedding if args.emit_embedding else None
    _emit(args, format_graph(s.graph, planted))
    return EXIT_OK


def cmd_stats(args):
    pattern = read_graph(args.pattern)
    rep = structure_report(pattern, args.n, args.q, args.tau)
    _json(args, rep.to_json())
    if rep.regime == "undefined":
        print(
            "pattern has no edges; rerun stats on its complement with q -> 1-q",
            file=sys.stderr,
        )
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_detect(args):
    pattern = read_graph(args.pattern)
    g = _read_stdin_graph()
    if args.test == "scan":
        v = detectors.scan_test(g, pattern, args.n, args.q, k_star=args.k_star)
    elif args.test == "degree":
        v = detectors.total_degree_test(g, pattern, args.n, args.q)
    else:
        cfg = detectors.SpectralConfig(delta=args.delta)
        v = detectors.spectral_test(g, pattern, args.n, args.q, cfg)
    _json(args, v.to_json())
    if v.degenerate:
        return EXIT_DEGENERATE
    return EXIT_H1 if v.rejects else EXIT_OK


def cmd_recover(args):
    pattern = read_graph(args.pattern)
    g = _read_stdin_graph()
    if g.n != args.n:
        raise InvalidArgument(f"graph has {g.n} vertices but --n is {args.n}")
    truth = None
    if args.truth:
        with open(args.truth) as fh:
            truth = parse_planted(fh.read())
        if truth is None:
            raise InvalidArgument(f"no planted vertex list found in {args.truth}")
    if args.method == "exhaustive":
        res = recovery.exhaustive_recover(g, pattern, truth)
    else:
        res = recovery.max_degree_recover(g, pattern.n, args.q, pattern, truth)
    _json(args, res.to_json())
    return EXIT_OK


def _test_kwargs(args):
    if args.test == "scan":
        return {"k_star": args.k_star}
    if args.test == "spectral":
        return {"cfg": detectors.SpectralConfig(delta=args.delta)}
    return {}


def cmd_risk(args):
    pattern = read_graph(args.pattern)
    params = PlantParams(args.n, args.q, pattern, args.ensemble, args.seed)
    est = harness.estimate_risk(
        args.test, params, args.trials, args.seed, _test_kwargs(args), args.threads
    )
    _json(args, est.to_json())
    return EXIT_OK


LOWDEGREE_COLUMNS = ("n", "k", "q", "D", "exact_or_bound", "value", "regime")


def cmd_lowdegree(args):
    pattern = read_graph(args.pattern) if args.pattern else None
    if args.grid:
        ns = parse_int_range(args.grid)
    elif args.n is not None:
        ns = [args.n]
    else:
        raise InvalidArgument("give --n or --grid")
    rows = []
    for n in ns:
        if args.k_exp is not None:
            k = n**args.k_exp
        elif args.k is not None:
            k = args.k
        elif pattern is not None:
            k = pattern.n
        else:
            raise InvalidArgument("give --k, --k-exp or --pattern")
        D = args.D if args.D is not None else lowdegree.default_degree(n)
        if args.mode == "exact":
            if pattern is None:
                raise InvalidArgument("exact mode needs --pattern")
            val = lowdegree.exact_lowdegree_norm(PlantParams(n, args.q, pattern), D)
            rows.append((n, pattern.n, args.q, D, "exact", val, ""))
        else:
            rep = lowdegree.lowdegree_bound_conditions(n, k, args.q, D)
            for label, val in (("bound_clique", rep.bound_clique), ("bound_indep", rep.bound_indep)):
                rows.append((n, k, args.q, D, label, val, "bounded" if val < 1 else "unbounded"))
    lines = [",".join(LOWDEGREE_COLUMNS)]
    for row in rows:
        lines.append(",".join(harness._fmt(x) for x in row))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_phase(args):
    family = args.family
    if args.pattern:
        family = read_graph(args.pattern)
    Ds = [None] if args.D is None else parse_int_range(args.D)
    grid = harness.GridSpec(
        ns=parse_int_range(args.n),
        ks=parse_int_range(args.k) if args.k else [],
        qs=parse_float_list(args.q),
        Ds=Ds,
        family=family,
        ensemble=args.ensemble,
    )
    res = harness.phase_diagram(
        args.test, grid, args.trials, args.seed, _test_kwargs(args), args.threads,
        args.budget_seconds, args.resume,
    )
    appending = bool(args.resume and args.output and os.path.exists(args.output))
    _emit(args, res.to_csv(header=not appending), append=appending)
    if not res.complete:
        print(json.dumps({"complete": False, "resume_token": res.resume_token}), file=sys.stderr)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def _add_model(p, pattern_required=True):
    p.add_argument("--pattern", required=pattern_required, help="pattern graph file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget-seconds", type=float, default=None)
    common.add_argument("--output", default=None, help="write to FILE instead of stdout")

    parser = argparse.ArgumentParser(
        prog="plantedsub", description="Planted induced subgraph detection and recovery."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw a graph")
    p.add_argument("--ensemble", choices=["null", "subgraph", "union"], default="subgraph")
    _add_model(p, pattern_required=False)
    p.add_argument("--emit-embedding", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("stats", parents=[common], help="structure statistics as JSON")
    _add_model(p)
    p.add_argument("--tau", type=float, default=3.0)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("detect", parents=[common], help="run a test on a graph read from stdin")
    p.add_argument("--test", choices=["scan", "degree", "spectral"], required=True)
    _add_model(p)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--k-star", type=int, default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("recover", parents=[common], help="estimate the planted vertex set")
    p.add_argument("--method", choices=["exhaustive", "degree"], required=True)
    _add_model(p)
    p.add_argument("--truth", default=None, help="file with a '# planted:' line or vertex list")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("risk", parents=[common], help="Monte Carlo Type I+II risk")
    p.add_argument("--test", choices=["scan", "degree", "spectral"], required=True)
    _add_model(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--ensemble", choices=["subgraph", "union"], default="subgraph")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--k-star", type=int, default=None)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("lowdegree", parents=[common], help="low-degree norm or bound conditions")
    p.add_argument("--mode", choices=["exact", "bounds"], default="bounds")
    p.add_argument("--pattern", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--D", type=int, default=None, help="degree (default ceil(log n))")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--k-exp", type=float, default=None, help="use k = n^K_EXP on a grid")
    p.add_argument("--grid", default=None, help="n values, e.g. 2^10..2^20 or 100,200")
    p.set_defaults(func=cmd_lowdegree)

    p = sub.add_parser("phase", parents=[common], help="risk over a parameter grid as CSV")
    p.add_argument("--test", choices=["scan", "degree", "spectral"], required=True)
    p.add_argument("--family", choices=sorted(harness.FAMILIES), default="clique")
    p.add_argument("--pattern", default=None, help="fixed pattern file instead of a family")
    p.add_argument("--n", required=True, help="n values, e.g. 200 or 100,200")
    p.add_argument("--k", default=None, help="k values, e.g. 5..40 or 5..40:5")
    p.add_argument("--q", required=True, help="q values, e.g. 0.5 or 0.3,0.5")
    p.add_argument("--D", default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--ensemble", choices=["subgraph", "union"], default="subgraph")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--k-star", type=int, default=None)
    p.add_argument("--resume", default=None, help="token printed by an interrupted run")
    p.set_defaults(func=cmd_phase)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc} (bound={exc.bound})", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"undefined: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InvalidArgument, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
