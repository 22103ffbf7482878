"""Command-line interface.

Subcommands: ``generate`` (coordinates + edges for one seed), ``analyze``
(JSON report from files), ``sweep`` (CSV table from a JSON config), and
``verify`` (self-check suite). Exit codes: 0 success, 1 check failures,
2 usage errors, 3 I/O failures, 4 inconsistent data files.
"""

from __future__ import annotations

import argparse
import sys

EXIT_OK = 0
EXIT_CHECKS = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hrg",
        description="Hyperbolic random graphs: generation, analysis, experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample one graph and write its files")
    gen.add_argument("--n", type=int, required=True, help="target node count")
    gen.add_argument("--alpha", type=float, default=0.75, help="radial density exponent")
    gen.add_argument("--c-param", type=float, default=0.0, help="disc radius offset C")
    gen.add_argument("--seed", type=int, default=0, help="random seed")
    gen.add_argument(
        "--poisson", action="store_true", help="draw the point count from Poisson(n)"
    )
    gen.add_argument("--out-coords", required=True, help="coordinate TSV output path")
    gen.add_argument("--out-edges", required=True, help="edge TSV output path")

    ana = sub.add_parser("analyze", help="analyze coordinate + edge files")
    ana.add_argument("--coords", required=True, help="coordinate TSV input path")
    ana.add_argument("--edges", required=True, help="edge TSV input path")
    ana.add_argument("--report", help="JSON report output path (default stdout)")
    ana.add_argument("--inner-c", type=float, default=1.0, help="inner band constant c")

    swp = sub.add_parser("sweep", help="run a sweep from a JSON config")
    swp.add_argument("--config", required=True, help="JSON sweep config path")
    swp.add_argument(
        "--jobs", type=int, default=None, help="parallel cells (default: HRG_JOBS or 1)"
    )
    swp.add_argument("--out", help="CSV output path (overrides config out_csv)")

    ver = sub.add_parser("verify", help="run the self-check suite")
    ver.add_argument("--quick", action="store_true", help="reduced sample sizes")
    ver.add_argument("--seed", type=int, help="seed for the randomized checks")
    ver.add_argument("--coords", help="also validate this coordinate file")
    ver.add_argument("--edges", help="edge file that must match --coords")
    return parser


def _cmd_generate(args) -> int:
    from .files import write_coords, write_edges
    from .geometry import ModelParams
    from .graphgen import build_banded
    from .sampling import MODE_FIXED, MODE_POISSON, sample_fixed, sample_poisson

    try:
        params = ModelParams(args.n, args.alpha, args.c_param)
    except ValueError as exc:
        print(f"hrg generate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sampler = sample_poisson if args.poisson else sample_fixed
    ps = sampler(params, args.seed)
    g = build_banded(ps)
    with open(args.out_coords, "w", encoding="utf-8") as fh:
        write_coords(fh, ps)
    with open(args.out_edges, "w", encoding="utf-8") as fh:
        write_edges(fh, g)
    mode = MODE_POISSON if args.poisson else MODE_FIXED
    print(f"wrote {len(ps)} points and {g.m} edges (mode={mode}, R={params.R:.6g})")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    from .files import build_report, dump_report, read_coords, read_edges
    from .graphgen import Graph

    with open(args.coords, "r", encoding="utf-8") as fh:
        ps = read_coords(fh)
    with open(args.edges, "r", encoding="utf-8") as fh:
        edges = read_edges(fh, len(ps))
    g = Graph.from_edge_array(ps, edges[:, 0], edges[:, 1])
    report = build_report(g, inner_c=args.inner_c)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            dump_report(report, fh)
    else:
        dump_report(report, sys.stdout)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    import dataclasses
    import os

    from .experiments import SweepConfig, default_jobs, run_sweep, write_sweep_csv

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = SweepConfig.from_json(fh)
    except (ValueError, TypeError, KeyError) as exc:
        print(f"hrg sweep: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    # precedence: --jobs flag, then HRG_JOBS, then the config value
    if args.jobs is not None:
        jobs = args.jobs
    elif os.environ.get("HRG_JOBS", "").strip():
        jobs = default_jobs()
    else:
        jobs = config.jobs
    config = dataclasses.replace(config, jobs=max(1, jobs))
    records = run_sweep(config)
    out_path = args.out or config.out_csv
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            write_sweep_csv(records, fh)
    else:
        write_sweep_csv(records, sys.stdout)
    failures = [rec for rec in records if rec.failed]
    for rec in failures:
        print(f"cell n={rec.n} seed={rec.seed} failed: {rec.error}", file=sys.stderr)
    return EXIT_CHECKS if failures else EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_verify

    if bool(args.coords) != bool(args.edges):
        print("hrg verify: --coords and --edges must be given together", file=sys.stderr)
        return EXIT_USAGE
    results, code = run_verify(
        quick=args.quick, seed=args.seed, coords=args.coords, edges=args.edges
    )
    for result in results:
        print(result.line())
    total = len(results)
    passed = sum(1 for r in results if r.passed)
    print(f"{passed}/{total} checks passed")
    return code


def main(argv=None) -> int:
    from .files import DataFormatError

    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "analyze": _cmd_analyze,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except DataFormatError as exc:
        print(f"hrg {args.command}: inconsistent data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"hrg {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
