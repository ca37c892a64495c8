"""Outer-bound inequality system for the K-user MISO BC given CSIT marginals.

Two families per ordered/unordered user subset:

* weighted: ``sum_i d_{pi(i)} / i <= 1 + sum_{i>=2} (sum_{r<i} lambda_P^{pi(r)}) / (i (i-1))``
  for every ordered selection ``pi`` of j users (j = 1 gives the box ``d_i <= 1``);
* sum: ``sum_{i in S} d_i <= 1 + (sum of lambda_P + lambda_D over S, largest dropped)``
  for every subset ``S`` with at least two users.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .core import LinearInequality, MarginalProfile, Region, as_fraction


def _check_perm(perm: Sequence[int], users: int) -> tuple[int, ...]:
    perm = tuple(perm)
    if not perm:
        raise ValueError("permutation must select at least one user")
    if len(set(perm)) != len(perm):
        raise ValueError(f"duplicate user in permutation {perm}")
    for u in perm:
        if not 0 <= u < users:
            raise ValueError(f"user index {u} out of range for K={users}")
    return perm


def _label(users: Iterable[int]) -> str:
    return "(" + ",".join(str(u + 1) for u in users) + ")"


def weighted_inequality(marginals: MarginalProfile, perm: Sequence[int]) -> LinearInequality:
    """Weighted-family constraint for an ordered selection of users (0-based indices)."""
    k = marginals.users
    perm = _check_perm(perm, k)
    coeffs = [Fraction(0)] * k
    for i, u in enumerate(perm, start=1):
        coeffs[u] = Fraction(1, i)
    rhs = Fraction(1)
    prefix = Fraction(0)
    for i in range(2, len(perm) + 1):
        prefix += marginals.p(perm[i - 2])
        rhs += prefix / (i * (i - 1))
    tag = "box" if len(perm) == 1 else "weighted"
    return LinearInequality(tuple(coeffs), rhs, tag, _label(perm))


def psi_order(marginals: MarginalProfile, subset: Iterable[int]) -> tuple[int, ...]:
    """Users of ``subset`` sorted by lambda_P + lambda_D ascending, ties by index."""
    return tuple(sorted(set(subset), key=lambda u: (marginals.pd(u), u)))


def sum_inequality(marginals: MarginalProfile, subset: Iterable[int]) -> LinearInequality:
    subset = tuple(sorted(set(subset)))
    if not subset:
        raise ValueError("sum inequality needs a nonempty subset")
    _check_perm(subset, marginals.users)
    order = psi_order(marginals, subset)
    coeffs = [Fraction(0)] * marginals.users
    for u in subset:
        coeffs[u] = Fraction(1)
    rhs = 1 + sum((marginals.pd(u) for u in order[:-1]), Fraction(0))
    tag = "box" if len(subset) == 1 else "sum"
    return LinearInequality(tuple(coeffs), rhs, tag, _label(subset))


def inequality_count(users: int) -> int:
    """Size of the full system: 2^K - 1 + sum_{j>=2} j! C(K, j)."""
    return 2**users - 1 + sum(math.factorial(j) * math.comb(users, j) for j in range(2, users + 1))


def check_antennas(users: int, antennas: int | None) -> None:
    # The bound is only established for M >= K.
    if antennas is not None and antennas < users:
        raise ValueError(f"bound requires at least K={users} antennas, got M={antennas}")


def build_region(
    marginals: MarginalProfile, *, dedup: bool = False, antennas: int | None = None
) -> Region:
    k = marginals.users
    check_antennas(k, antennas)
    ineqs = []
    for j in range(1, k + 1):
        for subset in combinations(range(k), j):
            for perm in permutations(subset):
                ineqs.append(weighted_inequality(marginals, perm))
            if j >= 2:
                ineqs.append(sum_inequality(marginals, subset))
    region = Region(k, tuple(ineqs))
    return region.dedup() if dedup else region


def build_symmetric_region(
    lambda_p, lambda_d, users: int, *, dedup: bool = False, antennas: int | None = None
) -> Region:
    """Closed form for identical marginals at every user."""
    lp, ld = as_fraction(lambda_p), as_fraction(lambda_d)
    if lp < 0 or ld < 0 or lp + ld > 1:
        raise ValueError(f"invalid probabilities lambda_P={lp}, lambda_D={ld}")
    if users < 1:
        raise ValueError("need at least one user")
    check_antennas(users, antennas)
    ineqs = []
    for j in range(1, users + 1):
        harmonic_tail = sum((Fraction(1, i) for i in range(2, j + 1)), Fraction(0))
        for subset in combinations(range(users), j):
            for perm in permutations(subset):
                coeffs = [Fraction(0)] * users
                for i, u in enumerate(perm, start=1):
                    coeffs[u] = Fraction(1, i)
                tag = "box" if j == 1 else "weighted"
                ineqs.append(LinearInequality(tuple(coeffs), 1 + lp * harmonic_tail, tag, _label(perm)))
            if j >= 2:
                coeffs = [Fraction(1) if u in subset else Fraction(0) for u in range(users)]
                ineqs.append(LinearInequality(tuple(coeffs), 1 + (j - 1) * (lp + ld), "sum", _label(subset)))
    region = Region(users, tuple(ineqs))
    return region.dedup() if dedup else region
