"""Pattern-dependent bounds for three users and exact region comparison."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .core import CsitPattern, DofPoint, LinearInequality, Region, joint_mass, marginals_of
from .polytope import extreme_rays, violations, DimensionTooLarge, MAX_VERTEX_DIM
from .region import build_region


def pattern_weighted_inequality(pattern: CsitPattern, heavy: tuple[int, int]) -> LinearInequality:
    """2 d_a + 2 d_b + d_c <= 2 + pd_a + pd_b + Pr[a and b both in {P, D}].

    ``heavy`` holds the two users (0-based) with weight 2; pd is
    lambda_P + lambda_D. Only the three-user form is defined.
    """
    if pattern.users != 3:
        raise ValueError(f"pattern-dependent bound is defined for K=3, got K={pattern.users}")
    a, b = heavy
    if a == b or not {a, b} <= {0, 1, 2}:
        raise ValueError(f"heavy pair must be two distinct users, got {heavy}")
    m = marginals_of(pattern)
    spec = [None, None, None]
    spec[a] = spec[b] = "PD"
    rhs = 2 + m.pd(a) + m.pd(b) + joint_mass(pattern, spec)
    coeffs = [Fraction(1)] * 3
    coeffs[a] = coeffs[b] = Fraction(2)
    return LinearInequality(tuple(coeffs), rhs, "pattern", f"({min(a, b) + 1},{max(a, b) + 1})")


def tightened_region(pattern: CsitPattern) -> Region:
    """Marginal outer bound intersected with the three pattern-dependent bounds."""
    if pattern.users != 3:
        raise ValueError(f"tightened region is defined for K=3, got K={pattern.users}")
    base = build_region(marginals_of(pattern))
    extra = [pattern_weighted_inequality(pattern, pair) for pair in ((0, 1), (0, 2), (1, 2))]
    return base.with_inequalities(extra)


class Relation(str, enum.Enum):
    EQUAL = "equal"
    FIRST_INSIDE = "first strictly inside second"
    SECOND_INSIDE = "second strictly inside first"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Separator:
    point: DofPoint
    inside: int  # 1 or 2: the region that contains the point
    violated: tuple[LinearInequality, ...]  # constraints of the other region it breaks


@dataclass(frozen=True)
class Comparison:
    relation: Relation
    separators: tuple[Separator, ...]

    @property
    def separator(self) -> Separator | None:
        return self.separators[0] if self.separators else None


def _outside(points, region: Region, inside: int) -> list[Separator]:
    out = []
    for p in points:
        bad = violations(region, p)
        if bad:
            out.append(Separator(p, inside, tuple(bad)))
    # largest violation first, ties broken by descending coordinates
    def excess(sep: Separator) -> Fraction:
        return max(q.lhs(sep.point) - q.rhs for q in sep.violated)

    out.sort(key=lambda sep: (excess(sep), sep.point), reverse=True)
    return out


def compare_regions(r1: Region, r2: Region) -> Comparison:
    """Decide inclusion exactly from the vertices of both (bounded) regions."""
    if r1.dim != r2.dim:
        raise ValueError(f"dimension mismatch: {r1.dim} vs {r2.dim}")
    if r1.dim > MAX_VERTEX_DIM:
        raise DimensionTooLarge(f"region comparison is limited to K <= {MAX_VERTEX_DIM}")
    v1, d1 = extreme_rays(r1)
    v2, d2 = extreme_rays(r2)
    if d1 or d2:
        raise ValueError("region comparison needs bounded regions")
    only1 = _outside(v1, r2, 1)
    only2 = _outside(v2, r1, 2)
    if not only1 and not only2:
        relation = Relation.EQUAL
    elif not only1:
        relation = Relation.FIRST_INSIDE
    elif not only2:
        relation = Relation.SECOND_INSIDE
    else:
        relation = Relation.INCOMPARABLE
    return Comparison(relation, tuple(only1 + only2))
