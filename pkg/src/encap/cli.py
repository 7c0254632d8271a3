"""Command-line front end. Data goes to stdout, diagnostics to stderr."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
from typing import Any, Sequence

from . import experiments as ex
from .figures import FIGURES, SCALES, figure_table
from .hierarchy import hier_psc_enumerated, layered_psc_enumerated
from .ingest import function_graph_scan, load_manifest, scan_java_tree
from .metrics import amc_check, configuration_efficiency, ihv_percent
from .model import CapExceeded, FlatSystem, HierTree, LayeredSystem, ValidationError
from .psc import psc_unencapsulated, r_h, r_min, recommend_regions, s_min

log = logging.getLogger("encap")


# -- output -------------------------------------------------------------------


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if math.isnan(value):
            return "undefined"
        if value.is_integer() and abs(value) < 1e15:
            return str(int(value))
        return f"{value:.4f}"
    return str(value)


def render(header: Sequence[str], rows: Sequence[Sequence[Any]], style: str) -> str:
    cells = [[fmt(v) for v in row] for row in rows]
    if style == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return buf.getvalue()
    widths = [len(h) for h in header]
    for row in cells:
        widths = [max(a, len(b)) for a, b in zip(widths, row)]
    lines = ["  ".join(h.ljust(wd) for h, wd in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * wd for wd in widths))
    lines.extend("  ".join(c.rjust(wd) for c, wd in zip(row, widths)).rstrip() for row in cells)
    return "\n".join(lines) + "\n"


def emit(args: argparse.Namespace, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    sys.stdout.write(render(header, rows, args.format))


def series_rows(series: ex.Series) -> list[list[Any]]:
    return [[x, y] for x, y in series.points]


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("ENCAP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"ENCAP_SEED must be an integer, got {env!r}") from None


# -- commands -----------------------------------------------------------------


def flat_report_rows(system: FlatSystem) -> tuple[list[str], list[list[Any]]]:
    rep = configuration_efficiency(system)
    row = rep.as_row()
    verdict = amc_check(system) if system.n else None
    comparable = bool(verdict and verdict.comparable)
    header = list(row) + ["comparable", "amc"]
    values = list(row.values()) + [comparable, verdict.is_amc if comparable else "n/a"]  # type: ignore[union-attr]
    return header, [values]


def context_report_rows(system: LayeredSystem | HierTree) -> tuple[list[str], list[list[Any]]]:
    if isinstance(system, LayeredSystem):
        psc, context = layered_psc_enumerated(system), "layered"
    else:
        psc, context = hier_psc_enumerated(system), "hier"
    n, h = system.n, system.h
    row = [context, n, system.r, h, psc, psc_unencapsulated(n), float("nan"),
           ihv_percent(n, h) if n else float("nan")]
    return ["context", "nodes", "regions", "public", "psc", "s_max", "c_e", "ihv_percent"], [row]


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.input:
        value = load_manifest(args.input)
    else:
        scan = function_graph_scan if args.graph == "second" else scan_java_tree
        code = scan(args.scan_java)
        for path in code.skipped:
            print(f"warning: skipped unreadable file {path}", file=sys.stderr)
        print(
            "note: lexical scan; unusual declarations may be missed or miscounted",
            file=sys.stderr,
        )
        if args.regions:
            rows = [
                [code.display_name(name), c.size, c.violating]
                for name, c in code.region_counts().items()
            ]
            sys.stderr.write(render(["region", "nodes", "public"], rows, "table"))
        value = code.collapse()
    if isinstance(value, FlatSystem):
        header, rows = flat_report_rows(value)
    else:
        header, rows = context_report_rows(value)
    emit(args, header, rows)
    return 0


def cmd_laws(args: argparse.Namespace) -> int:
    n, p = args.nodes, args.violations
    if n < 1:
        raise ValidationError("--nodes must be >= 1")
    if p <= 0:
        raise ValidationError("--violations must be > 0: the second and third laws are undefined at p = 0")
    rows = [
        ["first", "s_max", psc_unencapsulated(n)],
        ["second", "r_min", r_min(n, p)],
        ["second", "r_min_recommended", recommend_regions(n, p)],
        ["third", "r_h", r_h(n, p)],
        ["", "s_min", s_min(n, p)],
    ]
    emit(args, ["law", "quantity", "value"], rows)
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    header, rows = figure_table(args.id, resolve_seed(args.seed), args.scale, args.jobs)
    emit(args, header, rows)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.kind == "fixed":
        if args.regions is None:
            raise ValidationError("--regions is required for the fixed-system sweep")
        s = ex.fixed_system_sweep(args.nodes, args.regions, args.violations)
        rows = [[i, " ".join(map(str, split)), y] for i, (split, y) in enumerate(zip(s.metadata["splits"], s.ys))]
        emit(args, ["index", "split", "psc"], rows)
    else:
        s = ex.varied_region_sweep(args.nodes, args.violations, args.context)
        xname = "layers" if args.context == "layered" else "regions"
        emit(args, [xname, "psc"], series_rows(s))
    return 0


def cmd_growth(args: argparse.Namespace) -> int:
    s = ex.system_growth(args.max, args.violations, args.context)
    emit(args, ["nodes", "psc"], series_rows(s))
    return 0


def cmd_random(args: argparse.Namespace) -> int:
    params = ex.RandomSystemParams(args.nodes, args.count, resolve_seed(args.seed))
    rows = []
    for i, (system, rep) in enumerate(ex.random_systems(params, jobs=args.jobs)):
        rows.append([i, rep.r, rep.h, rep.s, rep.c_e, rep.ihv_percent])
    emit(args, ["system", "regions", "public", "psc", "c_e", "ihv_percent"], rows)
    return 0


def cmd_evolve(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    starts = [s for s, _ in ex.random_systems(ex.RandomSystemParams(args.nodes, args.systems, seed))]
    runs = ex.adhoc_evolution(starts, args.steps, seed, visibility=args.visibility, jobs=args.jobs)
    rows = []
    for i, series in enumerate(runs):
        rows.extend([i, x, y] for x, y in series.points)
    emit(args, ["system", "step", "c_e"], rows)
    burn = args.steps // 5
    tail = [y for s in runs for x, y in s.points if x >= burn]
    if tail:
        share = sum(1 for y in tail if 0.2 <= y <= 0.6) / len(tail)
        print(f"share of post-burn-in samples with c_e in [0.2, 0.6]: {share:.4f}", file=sys.stderr)
    return 0


def cmd_amc(args: argparse.Namespace) -> int:
    mode = "exhaustive" if args.exhaustive else "sampled"
    res = ex.amc_census(
        args.nodes, args.regions, mode, samples=args.samples, seed=resolve_seed(args.seed),
        reference=args.reference, jobs=args.jobs,
    )
    header = ["nodes", "regions", "mode", "reference", "configurations", "comparable", "amc",
              "amc_fraction", "min_gap_percent"]
    row = [res.n, res.r, res.mode, res.reference, res.configurations, res.comparable, res.amc_count,
           res.amc_fraction, res.min_gap_percent]
    emit(args, header, [row])
    return 0


# -- parser -------------------------------------------------------------------


def _common(default_format: str = "table") -> argparse.ArgumentParser:
    # a fresh parent per subcommand; argparse shares parent actions by reference
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv"), default=default_format)
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for experiments (output does not depend on it)")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:

    parser = argparse.ArgumentParser(prog="encap", description="Potential structural complexity of encapsulated systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[_common()], help="metrics for a manifest or a Java source tree")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="manifest file")
    src.add_argument("--scan-java", metavar="DIR", help="Java source tree")
    p.add_argument("--graph", choices=("second", "third"), default="third",
                   help="third: packages hold types; second: types hold methods")
    p.add_argument("--regions", action="store_true", help="also list per-region counts on stderr")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("laws", parents=[_common()], help="the three laws for n nodes and p violations per region")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--violations", type=float, required=True)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("figure", parents=[_common("csv")], help="CSV data behind a figure")
    p.add_argument("id", type=int, choices=sorted(FIGURES))
    p.add_argument("--seed", type=int)
    p.add_argument("--scale", choices=sorted(SCALES), default="small")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep", parents=[_common()], help="fixed-system or varied-region sweep")
    p.add_argument("--kind", choices=("fixed", "varied"), default="varied")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--regions", type=int)
    p.add_argument("--violations", type=int, default=1)
    p.add_argument("--context", choices=("flat", "layered", "hier2d"), default="flat")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("growth", parents=[_common()], help="minimum P.S.C. as the system grows")
    p.add_argument("--context", choices=("unencapsulated", "flat", "layered", "hier2d"), default="flat")
    p.add_argument("--max", type=int, default=100)
    p.add_argument("--violations", type=int, default=1)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("random", parents=[_common()], help="randomly generated systems with their metrics")
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("evolve", parents=[_common()], help="configuration efficiency under ad hoc updates")
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--systems", type=int, default=10)
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--visibility", choices=("coin", "ihv"), default="coin",
                   help="coin: added units are public half the time; ihv: at the current public share")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("amc", parents=[_common()], help="census of anomalous minimised configurations")
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--regions", type=int, default=2)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--reference", choices=("theory", "same_r"), default="theory")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_amc)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValidationError, CapExceeded, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
