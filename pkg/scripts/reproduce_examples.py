"""Recompute every worked example and print exact values next to the expected ones."""

import argparse
from fractions import Fraction as F

from misodof.core import MarginalProfile, marginals_of
from misodof.figures import FIG2_FIXED, FIG5, FIG6_A, FIG6_B, FIG7_A, FIG10_A, FIG10_B
from misodof.patterns import compare_regions, pattern_weighted_inequality, tightened_region
from misodof.polytope import lp_max, remove_redundant, vertices
from misodof.region import build_region, sum_inequality
from misodof.schemes import (
    SchemeConfig,
    account,
    alternating_order2_scheme,
    fig5_scheme,
    hybrid_corner_scheme,
    mat_min_delay,
    mat_schedule,
    simulate_decode,
)


def rows(trials: int, seed: int):
    ones = (1, 1, 1)
    yield "sum bound, Fig. 7 marginals", lp_max(build_region(marginals_of(FIG7_A)), ones).value, F(28, 11)
    yield "sum bound, Fig. 6(a)", lp_max(build_region(marginals_of(FIG6_A)), ones).value, F(7, 4)
    yield "sum bound, Fig. 6(b)", lp_max(build_region(marginals_of(FIG6_B)), ones).value, F(7, 4)
    yield "sum bound, Fig. 5 marginals", sum_inequality(marginals_of(FIG5), {0, 1, 2}).rhs, F(5, 3)
    yield "sum bound, fixed CSIT", sum_inequality(marginals_of(FIG2_FIXED), {0, 1, 2}).rhs, F(1)
    schedule, res = fig5_scheme()
    yield "Fig. 5 scheme sum DoF", res.sum_dof, F(5, 3)
    verdict = simulate_decode(schedule, SchemeConfig(3, 3, trials=trials, seed=seed))
    yield "Fig. 5 decodable trials", trials - max(verdict.deficient_trials), trials
    yield "alternating scheme sum DoF", alternating_order2_scheme()[1].sum_dof, F(24, 17)
    yield "MAT K=3 sum DoF", account(mat_schedule(3, 1)).sum_dof, F(18, 11)
    yield "MAT K=3 minimum delayed CSIT", mat_min_delay(3, 1), F(5, 11)
    case_a = remove_redundant(build_region(MarginalProfile.symmetric(F(1, 3), 0, 3)))
    yield "case A irredundant inequalities", len(case_a), 7
    yield "case B symmetric corner", hybrid_corner_scheme(F(1, 3), F(1, 3), 3, [0, 1, 2])[1].dof[0], F(23, 33)
    yield "Fig. 10(b) pattern bound", pattern_weighted_inequality(FIG10_B, (0, 1)).rhs, F(8, 3)
    cmp = compare_regions(tightened_region(FIG10_B), tightened_region(FIG10_A))
    yield "Fig. 10 relation", cmp.relation.value, "first strictly inside second"
    yield "Fig. 10 separator", cmp.separator.point, (1, F(1, 3), F(1, 3))
    yield "vertices, case A", len(vertices(build_region(MarginalProfile.symmetric(F(1, 3), 0, 3)))), None


def show(x) -> str:
    if isinstance(x, tuple):
        return "(" + ", ".join(show(v) for v in x) + ")"
    return str(x)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    bad = 0
    for name, got, want in rows(args.trials, args.seed):
        flag = "" if want is None else ("ok" if got == want else "MISMATCH")
        bad += flag == "MISMATCH"
        print(f"{name:34s} {show(got):30s} {'' if want is None else show(want):30s} {flag}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
