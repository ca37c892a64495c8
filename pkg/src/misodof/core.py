"""Exact-arithmetic domain types: CSIT states and patterns, marginals, inequalities, regions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
DofPoint = tuple[Fraction, ...]


class CsitState(str, enum.Enum):
    P = "P"  # perfect, instantaneous
    D = "D"  # delayed (fed back after the channel changed)
    N = "N"  # not known

    def __str__(self) -> str:
        return self.value


STATES = (CsitState.P, CsitState.D, CsitState.N)


class PatternParseError(ValueError):
    """Malformed pattern text; ``row`` and ``col`` are 1-based."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", col {col})" if col is not None else ")")
        super().__init__(message + where)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "a/b" strings to Fraction. Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a probability")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class CsitPattern:
    """users x slots grid of CSIT states, read periodically over time."""

    grid: tuple[tuple[CsitState, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(CsitState(s) for s in row) for row in self.grid)
        if not grid or not grid[0]:
            raise ValueError("pattern needs at least one user and one slot")
        width = len(grid[0])
        for i, row in enumerate(grid):
            if len(row) != width:
                raise ValueError(f"user {i + 1} has {len(row)} slots, expected {width}")
        object.__setattr__(self, "grid", grid)

    @property
    def users(self) -> int:
        return len(self.grid)

    @property
    def slots(self) -> int:
        return len(self.grid[0])

    def column(self, t: int) -> tuple[CsitState, ...]:
        return tuple(row[t] for row in self.grid)

    def columns(self) -> list[tuple[CsitState, ...]]:
        return [self.column(t) for t in range(self.slots)]

    def permute_users(self, order: Sequence[int]) -> CsitPattern:
        """Row i of the result is row ``order[i]`` (0-based) of this pattern."""
        return CsitPattern(tuple(self.grid[i] for i in order))

    @classmethod
    def from_columns(cls, columns: Iterable[str | Sequence[CsitState]]) -> CsitPattern:
        cols = [tuple(CsitState(s) for s in c) for c in columns]
        return cls(tuple(zip(*cols)))

    def __str__(self) -> str:
        return serialize_pattern(self)


@dataclass(frozen=True)
class MarginalProfile:
    """Per-user (lambda_P, lambda_D, lambda_N), each row summing to exactly 1."""

    probs: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        rows = []
        for i, row in enumerate(self.probs):
            if len(row) != 3:
                raise ValueError(f"user {i + 1}: need (lambda_P, lambda_D, lambda_N)")
            p, d, n = (as_fraction(x) for x in row)
            for x in (p, d, n):
                if not 0 <= x <= 1:
                    raise ValueError(f"user {i + 1}: probability {x} outside [0, 1]")
            if p + d + n != 1:
                raise ValueError(f"user {i + 1}: probabilities sum to {p + d + n}, not 1")
            rows.append((p, d, n))
        if not rows:
            raise ValueError("marginal profile needs at least one user")
        object.__setattr__(self, "probs", tuple(rows))

    @classmethod
    def from_pd(cls, pairs: Iterable[tuple]) -> MarginalProfile:
        """Build from (lambda_P, lambda_D) pairs; lambda_N is the remainder."""
        rows = []
        for p, d in pairs:
            p, d = as_fraction(p), as_fraction(d)
            rows.append((p, d, 1 - p - d))
        return cls(tuple(rows))

    @classmethod
    def symmetric(cls, lambda_p, lambda_d, users: int) -> MarginalProfile:
        return cls.from_pd([(lambda_p, lambda_d)] * users)

    @property
    def users(self) -> int:
        return len(self.probs)

    def p(self, i: int) -> Fraction:
        return self.probs[i][0]

    def d(self, i: int) -> Fraction:
        return self.probs[i][1]

    def n(self, i: int) -> Fraction:
        return self.probs[i][2]

    def pd(self, i: int) -> Fraction:
        """lambda_P + lambda_D of user i (0-based)."""
        return self.probs[i][0] + self.probs[i][1]

    def is_symmetric(self) -> bool:
        return all(row == self.probs[0] for row in self.probs)

    def permute_users(self, order: Sequence[int]) -> MarginalProfile:
        return MarginalProfile(tuple(self.probs[i] for i in order))

    def average(self) -> tuple[Fraction, Fraction, Fraction]:
        k = self.users
        return tuple(sum((row[q] for row in self.probs), Fraction(0)) / k for q in range(3))


@dataclass(frozen=True)
class LinearInequality:
    """sum(coeffs[i] * d[i]) <= rhs.

    ``tag`` is the family ("box", "weighted", "sum", "pattern", "user");
    ``label`` names the member, e.g. the permutation or subset it came from.
    """

    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    tag: str = "user"
    label: str = ""

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if not any(coeffs):
            raise ValueError("inequality needs a nonzero coefficient")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point)), Fraction(0))

    def satisfied(self, point: Sequence[Fraction]) -> bool:
        return self.lhs(point) <= self.rhs

    def key(self) -> tuple:
        return self.coeffs, self.rhs

    def permute_users(self, order: Sequence[int]) -> LinearInequality:
        """Relabel so that new user i is old user ``order[i]``."""
        return LinearInequality(tuple(self.coeffs[i] for i in order), self.rhs, self.tag, self.label)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            name = f"d{i + 1}"
            terms.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(terms) + f" <= {self.rhs}"


@dataclass(frozen=True)
class Region:
    """{d >= 0 : every inequality holds}; nonnegativity is implicit."""

    dim: int
    inequalities: tuple[LinearInequality, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ineqs = tuple(self.inequalities)
        for q in ineqs:
            if q.dim != self.dim:
                raise ValueError(f"inequality has dimension {q.dim}, region has {self.dim}")
        object.__setattr__(self, "inequalities", ineqs)

    def __len__(self) -> int:
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    def constraint_set(self) -> frozenset:
        """Inequalities as (coeffs, rhs) pairs, ignoring tags and multiplicity."""
        return frozenset(q.key() for q in self.inequalities)

    def with_inequalities(self, extra: Iterable[LinearInequality]) -> Region:
        return Region(self.dim, self.inequalities + tuple(extra))

    def dedup(self) -> Region:
        seen = set()
        kept = []
        for q in self.inequalities:
            if q.key() not in seen:
                seen.add(q.key())
                kept.append(q)
        return Region(self.dim, tuple(kept))

    def permute_users(self, order: Sequence[int]) -> Region:
        return Region(self.dim, tuple(q.permute_users(order) for q in self.inequalities))


# ---------------------------------------------------------------------------
# pattern statistics


def marginals_of(pattern: CsitPattern) -> MarginalProfile:
    t = pattern.slots
    rows = []
    for row in pattern.grid:
        rows.append(tuple(Fraction(row.count(q), t) for q in STATES))
    return MarginalProfile(tuple(rows))


def _normalize_spec(spec, users: int) -> list[frozenset[CsitState] | None]:
    if len(spec) != users:
        raise ValueError(f"spec covers {len(spec)} users, pattern has {users}")
    out = []
    for entry in spec:
        if entry is None or entry == "-" or entry == "*":
            out.append(None)
        else:
            out.append(frozenset(CsitState(s) for s in entry))
    return out


def joint_mass(pattern: CsitPattern, spec: Sequence) -> Fraction:
    """Fraction of slots whose column matches ``spec``.

    ``spec`` has one entry per user: an iterable of admissible states
    (e.g. ``"PD"``) or ``None``/``"-"`` for "don't care".
    """
    admissible = _normalize_spec(spec, pattern.users)
    hits = 0
    for col in pattern.columns():
        if all(a is None or s in a for s, a in zip(col, admissible)):
            hits += 1
    return Fraction(hits, pattern.slots)


def parse_pattern(text: str) -> CsitPattern:
    """Parse rows of P/D/N characters; row i is user i, column t is slot t.

    Blank lines and surrounding whitespace are ignored, as are lines
    starting with ``#``.
    """
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for col, ch in enumerate(line, start=1):
            if ch not in "PDN":
                raise PatternParseError(f"illegal character {ch!r}", len(rows) + 1, col)
            row.append(CsitState(ch))
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PatternParseError(
                f"ragged pattern: {len(row)} slots, expected {width}", len(rows) + 1
            )
        rows.append(tuple(row))
    if not rows:
        raise PatternParseError("empty pattern")
    return CsitPattern(tuple(rows))


def serialize_pattern(pattern: CsitPattern) -> str:
    return "\n".join("".join(s.value for s in row) for row in pattern.grid)


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
