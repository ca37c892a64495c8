"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction as F
from itertools import permutations
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from misodof.core import CsitPattern, MarginalProfile, marginals_of  # noqa: E402
from misodof.figures import FIG2_FIXED, FIG6_A, FIG6_B, FIG7_A, FIG7_B, FIG10_A, FIG10_B  # noqa: E402
from misodof.patterns import Relation, compare_regions, pattern_weighted_inequality, tightened_region  # noqa: E402
from misodof.polytope import contains, lp_max, pareto_maximal, remove_redundant, vertices  # noqa: E402
from misodof.region import build_region, sum_inequality  # noqa: E402
from misodof.schemes import (  # noqa: E402
    InfeasibleScheme,
    SchemeConfig,
    account,
    alternating_order2_scheme,
    corner_scheme_case_a,
    feedback_census,
    fig5_scheme,
    fixed_csit_scheme,
    hybrid_corner_scheme,
    hybrid_feasible,
    mat_min_delay,
    mat_schedule,
    rate_slope,
    simulate_decode,
    zf_pattern_scheme,
)

REPORT: dict[int, str] = {}
ONES = (1, 1, 1)
SNR_20_60 = tuple(10 ** (db / 10) for db in (20, 30, 40, 50, 60))


def record(n: int, ok: bool, detail: str) -> None:
    REPORT[n] = f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(REPORT[n])
    assert ok, REPORT[n]


def test_criterion_01_fig7_sum_bound():
    values = {name: lp_max(build_region(marginals_of(p)), ONES).value for name, p in (("a", FIG7_A), ("b", FIG7_B))}
    ok = all(v == F(28, 11) for v in values.values())
    record(1, ok, f"Fig. 7 sum-DoF bound = {values['a']} (pattern a), {values['b']} (pattern b); want 28/11")


def test_criterion_02_asymmetric():
    va = lp_max(build_region(marginals_of(FIG6_A)), ONES).value
    vb = lp_max(build_region(marginals_of(FIG6_B)), ONES).value
    lam = [marginals_of(FIG6_A).p(i) for i in range(3)], [marginals_of(FIG6_B).p(i) for i in range(3)]
    ok = va == vb == F(7, 4) and lam[0][:2] == lam[1][:2] and lam[0][2] != lam[1][2]
    record(2, ok, f"Fig. 6(a) bound {va}, Fig. 6(b) bound {vb}; largest lambda_P {lam[0][2]} vs {lam[1][2]}")


def test_criterion_03_fig5():
    t0 = time.perf_counter()
    schedule, res = fig5_scheme()
    bound = sum_inequality(res.marginals(), {0, 1, 2}).rhs
    verdict = simulate_decode(schedule, SchemeConfig(3, 3, trials=100, seed=7))
    elapsed = time.perf_counter() - t0
    ok = (
        res.dof == (F(2, 3), F(2, 3), F(1, 3))
        and bound == F(5, 3) == res.sum_dof
        and verdict.all_decodable
        and verdict.deficient_trials == (0, 0, 0)
        and elapsed < 5
    )
    record(3, ok, f"dof {tuple(map(str, res.dof))}, bound {bound}, decodable "
                  f"{100 - max(verdict.deficient_trials)}/100 at seed 7, {elapsed:.2f}s")


def test_criterion_04_mat_census():
    bad = [(k, j) for k in range(1, 7) for j in range(1, k + 1)
           if feedback_census(mat_schedule(k, j)) != mat_min_delay(k, j)]
    s = account(mat_schedule(3, 1)).sum_dof
    d = mat_min_delay(3, 1)
    ok = not bad and s == F(18, 11) and d == F(5, 11)
    record(4, ok, f"census = min-delay formula for all 21 (K<=6, j<=K) pairs, mismatches {bad}; "
                  f"MAT(3,1) sum DoF {s}, min delay {d}")


def test_criterion_05_alternating_vs_fixed():
    schedule, alt = alternating_order2_scheme()
    bound_fixed = sum_inequality(marginals_of(FIG2_FIXED), {0, 1, 2}).rhs
    _, fixed = fixed_csit_scheme()
    decodes = simulate_decode(schedule, SchemeConfig(3, 3, trials=20, seed=0)).all_decodable
    ok = alt.sum_dof == F(24, 17) and bound_fixed == 1 and fixed.sum_dof == 1 and decodes
    record(5, ok, f"alternating sum DoF {alt.sum_dof} ({sum(alt.counts)} symbols / {alt.slots} slots, "
                  f"decodable {decodes}); fixed bound {bound_fixed}, achieved {fixed.sum_dof}")


def test_criterion_06_case_a():
    region = build_region(MarginalProfile.symmetric(F(1, 3), 0, 3))
    kept = remove_redundant(region)
    tags = sorted(q.tag for q in kept)
    corners = sorted(set(permutations((F(1), F(1, 3), F(1, 3)))))
    vs = vertices(region)
    achieved = [corner_scheme_case_a(3, F(1, 3), c.index(1))[1].dof for c in corners]
    ok = (
        len(kept) == 7
        and tags == ["box"] * 3 + ["sum"] * 4
        and all(c in vs for c in corners)
        and achieved == corners
        and sorted(pareto_maximal(vs)) == corners
    )
    record(6, ok, f"{len(kept)} irredundant ({tags.count('box')} box + {tags.count('sum')} sum); "
                  f"corners in vertex set and achieved: {achieved == corners}")


def test_criterion_07_case_b():
    checked = []
    ok = True
    for lp, ld in ((F(1, 3), F(1, 3)), (F(1, 2), F(1, 3)), (F(0), F(1)), (F(1, 5), F(2, 5))):
        assert (1 - lp - ld) <= ld / F(5, 6)
        region = build_region(MarginalProfile.symmetric(lp, ld, 3))
        sums_redundant = all(q.tag != "sum" for q in remove_redundant(region))
        pair = (2 + lp) / 3
        sym = (6 + 5 * lp) / 11
        vs = vertices(region)
        targets = sorted(set(permutations((pair, pair, lp)))) + [(sym, sym, sym)]
        in_vs = all(t in vs for t in targets)
        reproduced = True
        for t in targets:
            subset = [u for u in range(3) if t[u] != lp] if t[0] != sym else [0, 1, 2]
            if hybrid_feasible(lp, ld, len(subset)):
                reproduced &= hybrid_corner_scheme(lp, ld, 3, subset)[1].dof == t
        ok &= sums_redundant and in_vs and reproduced
        checked.append(f"({lp},{ld}):{'ok' if sums_redundant and in_vs and reproduced else 'bad'}")
    record(7, ok, "sum family redundant, corner vertices present and reproduced by the hybrid scheme: "
                  + " ".join(checked))


def test_criterion_08_pattern_dependence():
    same = marginals_of(FIG10_A) == marginals_of(FIG10_B)
    q = pattern_weighted_inequality(FIG10_B, (0, 1))
    cmp = compare_regions(tightened_region(FIG10_B), tightened_region(FIG10_A))
    sep = cmp.separator.point if cmp.separator else None
    ok = same and q.rhs == F(8, 3) and cmp.relation is Relation.FIRST_INSIDE and sep == (1, F(1, 3), F(1, 3))
    record(8, ok, f"equal marginals {same}; pattern bound '{q}'; relation '{cmp.relation.value}', "
                  f"separator {tuple(map(str, sep)) if sep else None}")


def _random_profile(rng, k):
    rows = []
    for _ in range(k):
        n = rng.choice((1, 2, 3, 4, 6, 12))
        a = rng.randint(0, n)
        b = rng.randint(0, n - a)
        rows.append((F(a, n), F(b, n), F(n - a - b, n)))
    return MarginalProfile(tuple(rows))


def _random_scheme(rng):
    kind = rng.choice(("case-a", "mat", "hybrid", "zf", "fixed"))
    k = rng.randint(1, 4)
    if kind == "case-a":
        return corner_scheme_case_a(k, F(rng.randint(0, 12), 12), rng.randrange(k))[1]
    if kind == "mat":
        return account(mat_schedule(k, rng.randint(1, k), minimal=True))
    if kind == "hybrid":
        lp = F(rng.randint(0, 6), 6)
        ld = F(rng.randint(0, int(6 - lp * 6)), 6)
        subset = rng.sample(range(k), rng.randint(1, k))
        try:
            return hybrid_corner_scheme(lp, ld, k, subset)[1]
        except InfeasibleScheme:
            return corner_scheme_case_a(k, lp, subset[0])[1]
    if kind == "zf":
        t = rng.randint(1, 5)
        cols = ["".join(rng.choice("PDN") for _ in range(k)) for _ in range(t)]
        return zf_pattern_scheme(CsitPattern.from_columns(cols))[1]
    return fixed_csit_scheme()[1]


def test_criterion_09_property_fuzz():
    rng = random.Random(20240917)
    t0 = time.perf_counter()
    failures = []
    cases = 0
    for _ in range(250):  # soundness of constructed schemes
        res = _random_scheme(rng)
        cases += 1
        if not contains(build_region(marginals_of(res.pattern)), res.dof):
            failures.append(("soundness", res.dof))
    for _ in range(150):  # permutation equivariance
        m = _random_profile(rng, rng.randint(1, 4))
        order = rng.sample(range(m.users), m.users)
        cases += 1
        if build_region(m.permute_users(order)).constraint_set() != build_region(m).permute_users(order).constraint_set():
            failures.append(("equivariance", m))
    for _ in range(120):  # LP optimum equals the best vertex
        m = _random_profile(rng, rng.randint(1, 4))
        w = [F(rng.randint(0, 4)) for _ in range(m.users)]
        r = build_region(m)
        cases += 1
        if lp_max(r, w).value != max(sum(a * x for a, x in zip(w, v)) for v in vertices(r)):
            failures.append(("lp-vertex", m, w))
    for _ in range(40):  # redundancy removal preserves membership
        m = _random_profile(rng, rng.randint(1, 3))
        r = build_region(m)
        red = remove_redundant(r)
        cases += 1
        for _ in range(100):
            p = tuple(F(rng.randint(0, 26), 24) for _ in range(m.users))
            if contains(r, p) != contains(red, p):
                failures.append(("redundancy", m, p))
                break
    elapsed = time.perf_counter() - t0
    ok = not failures and cases >= 500 and elapsed < 120
    record(9, ok, f"{cases} random cases (K<=4), {len(failures)} failures, {elapsed:.1f}s")


def test_criterion_10_slopes():
    zf2, _ = zf_pattern_scheme(CsitPattern.from_columns(["PP"]))
    s_zf = rate_slope(zf2, SchemeConfig(2, 2, SNR_20_60, trials=50, seed=1))
    fig5, _ = fig5_scheme()
    s5 = rate_slope(fig5, SchemeConfig(3, 3, SNR_20_60, trials=50, seed=1))
    ok = bool(np.all(np.abs(s_zf - 1) <= 0.05) and np.all(np.abs(s5 - np.array([2, 2, 1]) / 3) <= 0.05))
    record(10, ok, f"all-ZF K=2 slopes {np.round(s_zf, 3).tolist()}; Fig. 5 slopes {np.round(s5, 3).tolist()} "
                   f"vs (0.667, 0.667, 0.333), SNR 20-60 dB")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
