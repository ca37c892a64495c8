"""Hypothesis strategies for exact CSIT inputs."""

from fractions import Fraction

from hypothesis import strategies as st

from misodof.core import CsitPattern, MarginalProfile

DENOMS = (1, 2, 3, 4, 6, 12)


@st.composite
def probability_triples(draw, denom=None):
    n = denom or draw(st.sampled_from(DENOMS))
    a = draw(st.integers(0, n))
    b = draw(st.integers(0, n - a))
    return Fraction(a, n), Fraction(b, n), Fraction(n - a - b, n)


@st.composite
def marginal_profiles(draw, min_users=1, max_users=4):
    k = draw(st.integers(min_users, max_users))
    return MarginalProfile(tuple(draw(probability_triples()) for _ in range(k)))


@st.composite
def patterns(draw, min_users=1, max_users=4, max_slots=6):
    k = draw(st.integers(min_users, max_users))
    t = draw(st.integers(1, max_slots))
    row = st.lists(st.sampled_from("PDN"), min_size=t, max_size=t).map("".join)
    return CsitPattern(tuple(tuple(draw(row)) for _ in range(k)))


def rational_points(dim, denom=12, hi=14):
    return st.tuples(*[st.integers(0, hi).map(lambda v: Fraction(v, denom)) for _ in range(dim)])


def user_orders(k):
    return st.permutations(list(range(k)))
