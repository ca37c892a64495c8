"""Command-line front end. Every command prints one JSON document on stdout."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import figures
from .core import (
    CsitPattern,
    LinearInequality,
    MarginalProfile,
    PatternParseError,
    Region,
    as_fraction,
    fraction_str,
    marginals_of,
    parse_pattern,
    serialize_pattern,
)
from .patterns import compare_regions, tightened_region
from .polytope import DimensionTooLarge, contains, lp_max, pareto_maximal, remove_redundant, vertices
from .region import build_region, build_symmetric_region, inequality_count
from .schemes import (
    InfeasibleScheme,
    ScheduleError,
    SchemeConfig,
    account,
    alternating_order2_scheme,
    corner_scheme_case_a,
    feedback_census,
    fig5_scheme,
    fixed_csit_scheme,
    hybrid_corner_scheme,
    mat_min_delay,
    mat_schedule,
    rate_curve,
    rate_slope,
    schedule_to_dict,
    simulate_decode,
    zf_pattern_scheme,
)

log = logging.getLogger("misodof")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_DIMENSION = 4
EXIT_SCHEDULE = 5

SCHEMES = ("case-a", "mat", "hybrid", "fig5", "alt24-17", "fixed", "zf-pattern")


class InputError(ValueError):
    pass


def num(x) -> dict:
    """Exact value plus a decimal annotation."""
    x = Fraction(x)
    return {"exact": fraction_str(x), "decimal": float(x)}


def point_json(point) -> list[dict]:
    return [num(x) for x in point]


def inequality_json(q: LinearInequality) -> dict:
    return {
        "tag": q.tag,
        "label": q.label,
        "coeffs": [fraction_str(c) for c in q.coeffs],
        "rhs": num(q.rhs),
        "text": str(q),
    }


def marginals_json(m: MarginalProfile) -> list[dict]:
    return [
        {"user": i + 1, "lambda_P": num(m.p(i)), "lambda_D": num(m.d(i)), "lambda_N": num(m.n(i))}
        for i in range(m.users)
    ]


# ---------------------------------------------------------------------------
# input handling


def load_pattern(source: str) -> CsitPattern:
    path = Path(source)
    if path.exists():
        return parse_pattern(path.read_text())
    if source in figures.PATTERNS:
        return figures.PATTERNS[source]
    raise InputError(f"no pattern file or built-in pattern named {source!r}")


def parse_marginals(text: str) -> MarginalProfile:
    """"lp:ld,lp:ld,..." with one pair per user."""
    pairs = []
    for chunk in text.split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise InputError(f"marginal entry {chunk!r} is not of the form lambda_P:lambda_D")
        pairs.append((as_fraction(parts[0]), as_fraction(parts[1])))
    return MarginalProfile.from_pd(pairs)


def parse_fraction_list(text: str) -> list[Fraction]:
    return [as_fraction(x) for x in text.split(",") if x.strip()]


def parse_users(text: str) -> list[int]:
    users = [int(x) - 1 for x in text.split(",") if x.strip()]
    if any(u < 0 for u in users):
        raise InputError("users are numbered from 1")
    return users


def add_region_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("region source")
    g.add_argument("--pattern", help="pattern file (rows P/D/N) or built-in name, e.g. fig10b")
    g.add_argument("--marginals", help="per-user lambda_P:lambda_D pairs, comma separated")
    g.add_argument("--k", type=int, help="number of users (with --lp/--ld)")
    g.add_argument("--lp", help="lambda_P for every user")
    g.add_argument("--ld", default="0", help="lambda_D for every user (default 0)")
    g.add_argument("--symmetric", action="store_true", help="use the closed symmetric form")
    g.add_argument("--tightened", action="store_true",
                   help="add the pattern-dependent bounds (needs a 3-user --pattern)")
    g.add_argument("--antennas", type=int, help="transmit antennas M (must be >= K)")


def region_from_args(args) -> tuple[Region, dict]:
    inputs: dict = {}
    pattern = None
    if args.pattern:
        if args.marginals or args.lp is not None:
            log.warning("both a pattern and marginals were given; using the pattern")
        pattern = load_pattern(args.pattern)
        marginals = marginals_of(pattern)
        inputs["pattern"] = serialize_pattern(pattern).splitlines()
    elif args.marginals:
        marginals = parse_marginals(args.marginals)
    elif args.k is not None and args.lp is not None:
        if args.k < 1:
            raise InputError("--k must be at least 1")
        marginals = MarginalProfile.symmetric(as_fraction(args.lp), as_fraction(args.ld), args.k)
    else:
        raise InputError("give --pattern, --marginals, or --k with --lp/--ld")
    inputs["marginals"] = marginals_json(marginals)

    if args.tightened:
        if pattern is None:
            raise InputError("--tightened needs --pattern")
        if args.antennas is not None and args.antennas < pattern.users:
            raise InputError(f"M={args.antennas} is below K={pattern.users}")
        region = tightened_region(pattern)
    elif args.symmetric:
        if not marginals.is_symmetric():
            raise InputError("--symmetric needs identical marginals for every user")
        p, d, _ = marginals.probs[0]
        region = build_symmetric_region(p, d, marginals.users, antennas=args.antennas)
    else:
        region = build_region(marginals, antennas=args.antennas)
    return region, inputs


# ---------------------------------------------------------------------------
# commands


def cmd_bound(args) -> dict:
    region, inputs = region_from_args(args)
    if args.dedup:
        region = region.dedup()
    if args.irredundant:
        region = remove_redundant(region)
    return {
        "inputs": inputs,
        "results": {
            "count": len(region),
            "full_count": inequality_count(region.dim),
            "inequalities": [inequality_json(q) for q in region],
        },
    }


def cmd_maxsum(args) -> dict:
    region, inputs = region_from_args(args)
    weights = parse_fraction_list(args.weights) if args.weights else [Fraction(1)] * region.dim
    if len(weights) != region.dim:
        raise InputError(f"{len(weights)} weights for a {region.dim}-user region")
    result = lp_max(region, weights)
    out = {"status": result.status.value, "weights": [fraction_str(w) for w in weights]}
    if result.value is not None:
        out["value"] = num(result.value)
        out["optimizer"] = point_json(result.optimizer)
    return {"inputs": inputs, "results": out}


def cmd_vertices(args) -> dict:
    region, inputs = region_from_args(args)
    if args.irredundant:
        region = remove_redundant(region)
    pts = vertices(region)
    top = set(pareto_maximal(pts))
    if args.csv:
        write_csv(args.csv, [f"d{i + 1}" for i in range(region.dim)] + ["pareto"],
                  [[float(x) for x in p] + [int(p in top)] for p in pts])
    return {
        "inputs": inputs,
        "results": {
            "count": len(pts),
            "vertices": [{"point": point_json(p), "pareto": p in top} for p in pts],
        },
    }


def build_scheme(args):
    name = args.scheme
    if name == "fig5":
        return fig5_scheme()
    if name == "alt24-17":
        return alternating_order2_scheme()
    if name == "fixed":
        return fixed_csit_scheme()
    if name == "zf-pattern":
        if not args.pattern:
            raise InputError("--scheme zf-pattern needs --pattern")
        return zf_pattern_scheme(load_pattern(args.pattern))
    k = args.k if args.k is not None else 3
    if name == "mat":
        schedule = mat_schedule(k, args.start)
        return schedule, account(schedule)
    if name == "case-a":
        return corner_scheme_case_a(k, as_fraction(args.lp or "0"), args.favored - 1)
    if name == "hybrid":
        subset = parse_users(args.subset) if args.subset else list(range(k))
        return hybrid_corner_scheme(as_fraction(args.lp or "0"), as_fraction(args.ld), k, subset)
    raise InputError(f"unknown scheme {name!r}")


def snr_grid(text: str) -> tuple[float, ...]:
    return tuple(10 ** (float(x) / 10) for x in text.split(",") if x.strip())


def cmd_simulate(args) -> dict:
    schedule, result = build_scheme(args)
    k = schedule.users
    m = args.antennas if args.antennas is not None else k
    config = SchemeConfig(k, m, snr_grid(args.snr), args.trials, args.seed)
    realized = marginals_of(result.pattern)
    out = {
        "scheme": schedule.name,
        "slots": result.slots,
        "counts": list(result.counts),
        "dof": point_json(result.dof),
        "sum_dof": num(result.sum_dof),
        "shared_symbols": result.shared,
        "shared_dof": num(result.shared_dof),
        "pattern": serialize_pattern(result.pattern).splitlines(),
        "marginals": marginals_json(realized),
        "feedback_census": num(feedback_census(schedule)),
        "inside_outer_bound": contains(build_region(realized), result.dof),
    }
    if args.scheme == "mat":
        out["min_delay"] = num(mat_min_delay(k, args.start))
    if args.trials > 0 and not args.no_decode:
        verdict = simulate_decode(schedule, config)
        out["verdict"] = {
            "all_decodable": verdict.all_decodable,
            "users": list(verdict.status),
            "deficient_trials": list(verdict.deficient_trials),
            "margin": list(verdict.margin),
            "trials": verdict.trials,
        }
    if args.slope:
        out["slopes"] = [float(s) for s in rate_slope(schedule, config)]
    if args.show_schedule:
        out["schedule"] = schedule_to_dict(schedule)
    return {"results": out, "seed": args.seed}


def cmd_compare(args) -> dict:
    regions = []
    inputs = {}
    for tag, source in (("a", args.first), ("b", args.second)):
        pattern = load_pattern(source)
        inputs[tag] = serialize_pattern(pattern).splitlines()
        if pattern.users == 3 and not args.marginal_only:
            regions.append(tightened_region(pattern))
        else:
            regions.append(build_region(marginals_of(pattern)))
    cmp = compare_regions(*regions)
    names = {1: args.first, 2: args.second}
    results = {"relation": cmp.relation.value}
    if cmp.relation.value == "first strictly inside second":
        results["summary"] = f"strict inclusion: {args.first} inside {args.second}"
    elif cmp.relation.value == "second strictly inside first":
        results["summary"] = f"strict inclusion: {args.second} inside {args.first}"
    else:
        results["summary"] = cmp.relation.value
    if cmp.separator is not None:
        sep = cmp.separator
        results["separator"] = {
            "point": point_json(sep.point),
            "inside": names[sep.inside],
            "violates": [inequality_json(q) for q in sep.violated],
        }
    return {"inputs": inputs, "results": results}


def write_csv(path: str, header: list[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    if path == "-":
        sys.stderr.write(buf.getvalue())
    else:
        Path(path).write_text(buf.getvalue())


def cmd_plotdata(args) -> dict:
    if args.scheme:
        schedule, _ = build_scheme(args)
        k = schedule.users
        m = args.antennas if args.antennas is not None else k
        config = SchemeConfig(k, m, snr_grid(args.snr), args.trials, args.seed)
        rates = rate_curve(schedule, config)
        header = ["snr_db"] + [f"rate{u + 1}" for u in range(k)]
        rows = [[float(x) for x in [10 * math.log10(p)] + list(r)]
                for p, r in zip(config.snr, rates)]
        kind = "rates"
    else:
        region, _ = region_from_args(args)
        pts = vertices(region)
        header = [f"d{i + 1}" for i in range(region.dim)]
        rows = [[float(x) for x in p] for p in pts]
        kind = "vertices"
    if args.csv:
        write_csv(args.csv, header, rows)
    return {"results": {"kind": kind, "header": header, "rows": rows}, "seed": args.seed}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="misodof", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="list the outer-bound inequalities")
    add_region_args(p)
    p.add_argument("--dedup", action="store_true", help="drop repeated inequalities")
    p.add_argument("--irredundant", action="store_true", help="keep only non-implied inequalities")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("maxsum", help="maximize a weighted DoF sum over the region")
    add_region_args(p)
    p.add_argument("--weights", help="comma-separated weights (default all ones)")
    p.set_defaults(func=cmd_maxsum)

    p = sub.add_parser("vertices", help="enumerate corner points (K <= 4)")
    add_region_args(p)
    p.add_argument("--irredundant", action="store_true")
    p.add_argument("--csv", help="also write vertex coordinates to this CSV path")
    p.set_defaults(func=cmd_vertices)

    def add_scheme_args(p, required):
        p.add_argument("--scheme", choices=SCHEMES, required=required)
        p.add_argument("--k", type=int, help="users (case-a, mat, hybrid; default 3)")
        p.add_argument("--lp", help="lambda_P (case-a, hybrid)")
        p.add_argument("--ld", default="0", help="lambda_D (hybrid)")
        p.add_argument("--favored", type=int, default=1, help="favored user, 1-based (case-a)")
        p.add_argument("--subset", help="MAT users, e.g. 1,2 (hybrid; default all)")
        p.add_argument("--start", type=int, default=1, help="message order fed to MAT")
        p.add_argument("--pattern", help="pattern for --scheme zf-pattern")
        p.add_argument("--antennas", type=int, help="M (default K)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--snr", default="20,30,40,50,60", help="SNR grid in dB")

    p = sub.add_parser("simulate", help="build a scheme, account DoF, run the rank test")
    add_scheme_args(p, required=True)
    p.add_argument("--slope", action="store_true", help="estimate finite-SNR rate slopes")
    p.add_argument("--no-decode", action="store_true", help="skip the Monte Carlo rank test")
    p.add_argument("--show-schedule", action="store_true", help="include the full schedule")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare the regions of two patterns")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--marginal-only", action="store_true",
                   help="ignore pattern-dependent bounds even for K=3")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plotdata", help="CSV rows for plotting: rate curves or vertices")
    add_region_args(p)
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--favored", type=int, default=1)
    p.add_argument("--subset")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--snr", default="20,30,40,50,60")
    p.add_argument("--csv", help="CSV output path ('-' for stderr)")
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except (PatternParseError, InputError, ValueError, ZeroDivisionError) as exc:
        code = EXIT_INPUT
        if isinstance(exc, InfeasibleScheme):
            code = EXIT_INFEASIBLE
        elif isinstance(exc, DimensionTooLarge):
            code = EXIT_DIMENSION
        elif isinstance(exc, ScheduleError):
            code = EXIT_SCHEDULE
        log.error("%s", exc)
        return code
    doc = {"command": ["misodof", *argv], **doc}
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
