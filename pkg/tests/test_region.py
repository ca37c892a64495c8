from fractions import Fraction as F
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from misodof.core import MarginalProfile, marginals_of
from misodof.figures import FIG5, FIG6_A, FIG7_MARGINALS
from misodof.region import (
    build_region,
    build_symmetric_region,
    inequality_count,
    psi_order,
    sum_inequality,
    weighted_inequality,
)

from oracles import sum_rhs_min_over_orders, weighted_rhs
from strategies import marginal_profiles, probability_triples, user_orders

FIG6A_M = marginals_of(FIG6_A)


def test_weighted_examples():
    q = weighted_inequality(FIG7_MARGINALS, (0, 1, 2))
    assert q.coeffs == (1, F(1, 2), F(1, 3)) and q.rhs == F(14, 9)
    assert weighted_inequality(FIG6A_M, (0, 1, 2)).rhs == F(5, 4)
    box = weighted_inequality(FIG7_MARGINALS, (2,))
    assert box.coeffs == (0, 0, 1) and box.rhs == 1 and box.tag == "box"
    with pytest.raises(ValueError):
        weighted_inequality(FIG7_MARGINALS, (0, 0))


def test_psi_order_examples():
    assert psi_order(FIG6A_M, {0, 1, 2}) == (0, 1, 2)
    assert psi_order(FIG7_MARGINALS, {2, 0}) == (0, 2)
    m = MarginalProfile.from_pd([(F(1, 2), 0), (F(1, 4), 0), (F(1), 0)])
    assert psi_order(m, {0, 1, 2}) == (1, 0, 2)


def test_sum_examples():
    assert sum_inequality(FIG6A_M, {0, 1, 2}).rhs == F(7, 4)
    assert sum_inequality(marginals_of(FIG5), {0, 1, 2}).rhs == F(5, 3)
    ones = MarginalProfile.symmetric(1, 0, 4)
    assert sum_inequality(ones, {0, 2, 3}).rhs == 3
    with pytest.raises(ValueError):
        sum_inequality(ones, set())


@pytest.mark.parametrize("k,count", [(1, 1), (2, 5), (3, 19), (4, 75), (5, 351)])
def test_count_formula(k, count):
    assert inequality_count(k) == count
    if k <= 4:
        assert len(build_region(MarginalProfile.symmetric(F(1, 3), 0, k))) == count


def test_k1_region():
    r = build_region(MarginalProfile.symmetric(1, 0, 1))
    assert [(q.coeffs, q.rhs) for q in r] == [((1,), 1)]


def test_symmetric_examples():
    assert build_symmetric_region(F(2, 3), F(1, 6), 3).constraint_set() == build_region(
        FIG7_MARGINALS
    ).constraint_set()
    full = build_symmetric_region(1, 0, 3)
    ones = (1, 1, 1)
    for q in full:
        if all(c != 0 for c in q.coeffs):
            assert q.lhs(ones) == q.rhs
    zero = build_symmetric_region(0, 0, 3)
    assert all(q.rhs == 1 for q in zero if all(c != 0 for c in q.coeffs))
    with pytest.raises(ValueError):
        build_symmetric_region(F(2, 3), F(1, 2), 3)


def test_antenna_guard():
    with pytest.raises(ValueError):
        build_region(FIG7_MARGINALS, antennas=2)
    assert len(build_region(FIG7_MARGINALS, antennas=5)) == 19


def test_dedup():
    # Distinct permutations put 1/i on distinct users, so no two generated
    # coefficient vectors coincide even for symmetric marginals.
    r = build_region(FIG7_MARGINALS)
    assert len(r.dedup()) == len(r.constraint_set()) == 19
    doubled = r.with_inequalities(r.inequalities[:4])
    assert len(doubled) == 23 and doubled.dedup() == r


@given(marginal_profiles())
def test_formulas_match_oracle(m):
    k = m.users
    for j in range(1, k + 1):
        for subset in combinations(range(k), j):
            for perm in permutations(subset):
                q = weighted_inequality(m, perm)
                assert q.rhs == weighted_rhs(m, perm)
                assert all(q.coeffs[u] == F(1, i + 1) for i, u in enumerate(perm))
            assert sum_inequality(m, subset).rhs == sum_rhs_min_over_orders(m, subset)


@given(marginal_profiles(), st.data())
def test_equivariance(m, data):
    order = data.draw(user_orders(m.users))
    lhs = build_region(m.permute_users(order)).constraint_set()
    rhs = build_region(m).permute_users(order).constraint_set()
    assert lhs == rhs


@given(marginal_profiles(), st.data())
def test_monotone_in_lambda_p(m, data):
    i = data.draw(st.integers(0, m.users - 1))
    p, d, n = m.probs[i]
    if n == 0:
        return
    step = data.draw(st.sampled_from([n, n / 2, n / 3]))
    probs = list(m.probs)
    probs[i] = (p + step, d, n - step)
    bigger = MarginalProfile(tuple(probs))
    for a, b in zip(build_region(m), build_region(bigger)):
        assert (a.tag, a.label, a.coeffs) == (b.tag, b.label, b.coeffs)
        assert b.rhs >= a.rhs


@given(marginal_profiles())
def test_rhs_at_least_one_and_box_points_inside(m):
    r = build_region(m)
    assert all(q.rhs >= 1 for q in r)
    for i in range(m.users):
        e = tuple(F(int(u == i)) for u in range(m.users))
        assert all(q.satisfied(e) for q in r)


@given(probability_triples(), st.integers(1, 4))
def test_symmetric_matches_general(triple, k):
    p, d, _ = triple
    sym = build_symmetric_region(p, d, k)
    gen = build_region(MarginalProfile.symmetric(p, d, k))
    assert sym.constraint_set() == gen.constraint_set()
    assert [(q.tag, q.label) for q in sym] == [(q.tag, q.label) for q in gen]


@given(marginal_profiles(min_users=2, max_users=2))
def test_two_user_region_depends_only_on_marginals(m):
    # Every rhs is a function of the profile alone; relabelling users just relabels constraints.
    r = build_region(m)
    assert len(r) == 5
    assert r.constraint_set() == build_region(m.permute_users((1, 0))).permute_users((1, 0)).constraint_set()
