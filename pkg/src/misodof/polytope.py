"""Exact rational LP, membership, redundancy removal and vertex enumeration.

Everything here works on ``fractions.Fraction``; there is no floating point.
The LP solver is a dictionary-form simplex with Bland's rule (two-phase when
the origin is infeasible). Vertices come from an exact double-description
pass over the homogenized cone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import DofPoint, LinearInequality, Region, as_fraction

MAX_VERTEX_DIM = 4


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Fraction | None = None
    optimizer: DofPoint | None = None


class DimensionTooLarge(ValueError):
    pass


class _Dictionary:
    """x_B[i] = beta[i] + sum_j alpha[i][j] * x_N[j];  z = z0 + sum_j c[j] * x_N[j]."""

    def __init__(self, basis, nonbasis, beta, alpha, z0, c):
        self.basis = basis
        self.nonbasis = nonbasis
        self.beta = beta
        self.alpha = alpha
        self.z0 = z0
        self.c = c

    def pivot(self, r: int, s: int) -> None:
        a_rs = self.alpha[r][s]
        row = self.alpha[r]
        inv = 1 / a_rs
        new_row = [-a / a_rs for a in row]
        new_row[s] = inv
        new_beta = -self.beta[r] / a_rs
        self.alpha[r] = new_row
        self.beta[r] = new_beta
        for i, other in enumerate(self.alpha):
            if i == r:
                continue
            a_is = other[s]
            if a_is == 0:
                continue
            self.beta[i] += a_is * new_beta
            for j, a in enumerate(new_row):
                if j == s:
                    other[j] = a_is * inv
                elif a:
                    other[j] += a_is * a
        c_s = self.c[s]
        if c_s:
            self.z0 += c_s * new_beta
            for j, a in enumerate(new_row):
                if j == s:
                    self.c[j] = c_s * inv
                elif a:
                    self.c[j] += c_s * a
        self.basis[r], self.nonbasis[s] = self.nonbasis[s], self.basis[r]

    def optimize(self) -> bool:
        """Run Bland's rule to optimality. Returns False if unbounded."""
        while True:
            entering = None
            for j, cj in enumerate(self.c):
                if cj > 0 and (entering is None or self.nonbasis[j] < self.nonbasis[entering]):
                    entering = j
            if entering is None:
                return True
            leaving = None
            best = None
            for i, row in enumerate(self.alpha):
                a = row[entering]
                if a < 0:
                    ratio = self.beta[i] / -a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leaving])
                    ):
                        best, leaving = ratio, i
            if leaving is None:
                return False
            self.pivot(leaving, entering)


def _solve(A, b, c) -> LpResult:
    """max c.x  s.t.  A x <= b, x >= 0 (all Fractions)."""
    m, n = len(A), len(c)
    basis = list(range(n, n + m))
    nonbasis = list(range(n))
    beta = list(b)
    alpha = [[-a for a in row] for row in A]

    if any(x < 0 for x in beta):
        aux = n + m
        lp = _Dictionary(basis, nonbasis + [aux], beta, [row + [Fraction(1)] for row in alpha],
                         Fraction(0), [Fraction(0)] * n + [Fraction(-1)])
        worst = min(range(m), key=lambda i: (beta[i], basis[i]))
        lp.pivot(worst, n)
        lp.optimize()
        if lp.z0 < 0:
            return LpResult(LpStatus.INFEASIBLE)
        if aux in lp.basis:
            r = lp.basis.index(aux)
            nonzero = [j for j, a in enumerate(lp.alpha[r]) if a != 0 and lp.nonbasis[j] != aux]
            if nonzero:
                lp.pivot(r, min(nonzero, key=lambda j: lp.nonbasis[j]))
            else:
                del lp.basis[r], lp.beta[r], lp.alpha[r]
        s = lp.nonbasis.index(aux)
        for row in lp.alpha:
            del row[s]
        del lp.nonbasis[s]
        basis, nonbasis, beta, alpha = lp.basis, lp.nonbasis, lp.beta, lp.alpha

    # Express the objective over the current nonbasic variables.
    z0 = Fraction(0)
    cvec = [Fraction(0)] * len(nonbasis)
    pos = {v: j for j, v in enumerate(nonbasis)}
    for v in range(n):
        if c[v] == 0:
            continue
        if v in pos:
            cvec[pos[v]] += c[v]
        else:
            i = basis.index(v)
            z0 += c[v] * beta[i]
            for j, a in enumerate(alpha[i]):
                cvec[j] += c[v] * a
    lp = _Dictionary(basis, nonbasis, beta, alpha, z0, cvec)
    if not lp.optimize():
        return LpResult(LpStatus.UNBOUNDED)
    x = [Fraction(0)] * n
    for i, v in enumerate(lp.basis):
        if v < n:
            x[v] = lp.beta[i]
    return LpResult(LpStatus.OPTIMAL, lp.z0, tuple(x))


def _system(inequalities: Sequence[LinearInequality]):
    return [list(q.coeffs) for q in inequalities], [q.rhs for q in inequalities]


def lp_max(region: Region, objective: Sequence) -> LpResult:
    """Maximize objective . d over {d >= 0} intersected with the region."""
    c = [as_fraction(x) for x in objective]
    if len(c) != region.dim:
        raise ValueError(f"objective has {len(c)} entries, region dimension is {region.dim}")
    A, b = _system(region.inequalities)
    result = _solve(A, b, c)
    if result.status is LpStatus.OPTIMAL:
        # The optimizer must be exactly feasible and attain the value.
        assert contains(region, result.optimizer)
        assert sum(ci * xi for ci, xi in zip(c, result.optimizer)) == result.value
    return result


def nonneg_inequality(dim: int, i: int) -> LinearInequality:
    coeffs = [Fraction(0)] * dim
    coeffs[i] = Fraction(-1)
    return LinearInequality(tuple(coeffs), Fraction(0), "nonneg", f"d{i + 1}>=0")


def violations(region: Region, point: Sequence) -> list[LinearInequality]:
    """Inequalities (including nonnegativity) that ``point`` violates."""
    point = tuple(as_fraction(x) for x in point)
    if len(point) != region.dim:
        raise ValueError(f"point has dimension {len(point)}, region has {region.dim}")
    bad = [nonneg_inequality(region.dim, i) for i, x in enumerate(point) if x < 0]
    bad.extend(q for q in region.inequalities if not q.satisfied(point))
    return bad


def contains(region: Region, point: Sequence) -> bool:
    return not violations(region, point)


def is_redundant(region: Region, index: int) -> bool:
    """True if inequality ``index`` is implied by the others and d >= 0."""
    target = region.inequalities[index]
    others = region.inequalities[:index] + region.inequalities[index + 1:]
    A, b = _system(others)
    result = _solve(A, b, list(target.coeffs))
    if result.status is LpStatus.INFEASIBLE:
        return True
    if result.status is LpStatus.UNBOUNDED:
        return False
    return result.value <= target.rhs


def remove_redundant(region: Region) -> Region:
    """Drop implied inequalities one at a time, in order; the set is unchanged."""
    kept = list(region.inequalities)
    i = 0
    while i < len(kept):
        if is_redundant(Region(region.dim, tuple(kept)), i):
            del kept[i]
        else:
            i += 1
    return Region(region.dim, tuple(kept))


# ---------------------------------------------------------------------------
# vertex enumeration (double description)


def _integer_row(coeffs: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in coeffs:
        den = den * x.denominator // math.gcd(den, x.denominator)
    row = [int(x * den) for x in coeffs]
    g = 0
    for v in row:
        g = math.gcd(g, v)
    return tuple(v // g for v in row) if g > 1 else tuple(row)


def _normalize(ray: list[int]) -> tuple[int, ...]:
    g = 0
    for v in ray:
        g = math.gcd(g, v)
    return tuple(v // g for v in ray) if g > 1 else tuple(ray)


def extreme_rays(region: Region) -> tuple[list[DofPoint], list[DofPoint]]:
    """Extreme points and extreme directions of {d >= 0} intersected with the region.

    Works on the cone {(t, d) : t >= 0, d >= 0, rhs*t - coeffs.d >= 0}; rays
    with t > 0 are vertices, rays with t = 0 are recession directions.
    """
    dim = region.dim + 1
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    # The orthant constraints (bits 0..dim-1) give the starting cone.
    for i in range(dim):
        ray = [0] * dim
        ray[i] = 1
        rays.append(tuple(ray))
        zeros.append(((1 << dim) - 1) & ~(1 << i))

    for bit, q in enumerate(region.inequalities, start=dim):
        a = _integer_row((q.rhs,) + tuple(-c for c in q.coeffs))
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            for i, v in enumerate(vals):
                if v == 0:
                    zeros[i] |= 1 << bit
            continue
        new_rays, new_zeros = [], []
        for ip in pos:
            for im in neg:
                common = zeros[ip] & zeros[im]
                if bin(common).count("1") < dim - 2:
                    continue
                adjacent = True
                for k, zk in enumerate(zeros):
                    if k != ip and k != im and common & zk == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vm = vals[ip], vals[im]
                ray = [vp * xm - vm * xp for xp, xm in zip(rays[ip], rays[im])]
                new_rays.append(_normalize(ray))
                new_zeros.append(common | (1 << bit))
        kept_rays, kept_zeros = [], []
        for i, v in enumerate(vals):
            if v > 0:
                kept_rays.append(rays[i])
                kept_zeros.append(zeros[i])
            elif v == 0:
                kept_rays.append(rays[i])
                kept_zeros.append(zeros[i] | (1 << bit))
        rays = kept_rays + new_rays
        zeros = kept_zeros + new_zeros

    points, directions = set(), set()
    for r in rays:
        t, rest = r[0], r[1:]
        if t > 0:
            points.add(tuple(Fraction(x, t) for x in rest))
        else:
            directions.add(_normalize(list(rest)))
    return sorted(points), [tuple(Fraction(x) for x in d) for d in sorted(directions)]


def vertices(region: Region) -> list[DofPoint]:
    """All extreme points, each once, in ascending lexicographic order."""
    if region.dim > MAX_VERTEX_DIM:
        raise DimensionTooLarge(
            f"vertex enumeration is limited to K <= {MAX_VERTEX_DIM}, got K={region.dim}"
        )
    points, _ = extreme_rays(region)
    return points


def is_bounded(region: Region) -> bool:
    return not extreme_rays(region)[1]


def pareto_maximal(points: Sequence[DofPoint]) -> list[DofPoint]:
    """Points not weakly dominated by a different point of the list."""
    out = []
    for p in points:
        dominated = any(
            q != p and all(qi >= pi for qi, pi in zip(q, p)) for q in points
        )
        if not dominated:
            out.append(p)
    return out


def tight_count(region: Region, point: DofPoint) -> int:
    """Number of constraints (nonnegativity included) holding with equality."""
    n = sum(1 for x in point if x == 0)
    return n + sum(1 for q in region.inequalities if q.lhs(point) == q.rhs)
