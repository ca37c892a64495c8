"""Achievability schedules, exact DoF accounting and Monte Carlo decodability checks.

A schedule is a list of slots. Each slot transmits a few streams; a stream
carries a payload (a fresh data symbol, an overheard signal, or a generic
linear mix of those) along a beam that is either generic or forced to be
orthogonal to the current channels of some users (zero forcing).

CSIT demands follow from the schedule itself: zero-forcing against user u
in slot t needs perfect CSIT of u at t; reusing what user u heard in slot t
needs u's channel at t to be fed back (delayed CSIT) before the reuse.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

from .core import CsitPattern, CsitState, DofPoint, as_fraction, fraction_str, marginals_of
from .figures import FIG2_FIXED, FIG5

RANK_TOL = 1e-6


class ScheduleError(ValueError):
    """Schedule ledger is inconsistent or violates its declared CSIT pattern."""


class InfeasibleScheme(ValueError):
    """The requested corner point cannot be reached with the available CSIT."""


# ---------------------------------------------------------------------------
# payload expressions


@dataclass(frozen=True)
class Sym:
    id: int


@dataclass(frozen=True)
class Heard:
    """Noiseless signal user ``user`` received in ``slot``, optionally only some streams."""

    user: int
    slot: int
    streams: tuple[int, ...] | None = None


@dataclass(frozen=True, eq=False)
class Mix:
    """Linear combination of payloads; ``weights=None`` means generic random weights."""

    terms: tuple
    weights: tuple[complex, ...] | None = None


Expr = Union[Sym, Heard, Mix]


@dataclass(frozen=True)
class Stream:
    payload: Expr
    nulls: frozenset[int] = frozenset()


@dataclass(frozen=True)
class SlotAction:
    kind: str  # "zf", "single", "mat", "retransmit"
    targets: frozenset[int]
    streams: tuple[Stream, ...]
    phase: int | None = None


@dataclass(frozen=True)
class Schedule:
    users: int
    slots: tuple[SlotAction, ...]
    owners: tuple[frozenset[int], ...]  # symbol id -> users that want it
    name: str = ""
    declared: CsitPattern | None = None
    ledger: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.slots)

    def feedback(self) -> list[tuple[int, int]]:
        """(user, slot) pairs whose channel is reused after the fact, sorted."""
        used = set()
        for action in self.slots:
            for stream in action.streams:
                for h in _heard_refs(stream.payload):
                    used.add((h.user, h.slot))
        return sorted(used)

    def demand(self) -> CsitPattern:
        """Least CSIT pattern the schedule needs."""
        grid = [[CsitState.N] * len(self.slots) for _ in range(self.users)]
        for u, t in self.feedback():
            grid[u][t] = CsitState.D
        for t, action in enumerate(self.slots):
            need_p = set()
            for stream in action.streams:
                need_p |= stream.nulls
            for u in need_p:
                grid[u][t] = CsitState.P
        return CsitPattern(tuple(tuple(row) for row in grid))

    def pattern(self) -> CsitPattern:
        return self.declared if self.declared is not None else self.demand()


@dataclass(frozen=True)
class SchemeResult:
    """Exact accounting of a schedule.

    ``counts`` holds each user's private symbols. Fresh symbols wanted by
    several users (MAT started at order j > 1) are common messages and are
    tallied in ``shared`` instead of being credited to every owner.
    """

    counts: tuple[int, ...]
    slots: int
    pattern: CsitPattern
    shared: int = 0

    @property
    def dof(self) -> DofPoint:
        return tuple(Fraction(c, self.slots) for c in self.counts)

    @property
    def sum_dof(self) -> Fraction:
        return Fraction(sum(self.counts), self.slots)

    @property
    def shared_dof(self) -> Fraction:
        """Common symbols delivered per slot."""
        return Fraction(self.shared, self.slots)

    def marginals(self):
        return marginals_of(self.pattern)


@dataclass(frozen=True)
class SchemeConfig:
    users: int
    antennas: int
    snr: tuple[float, ...] = (1e2, 1e3, 1e4, 1e5, 1e6)
    trials: int = 100
    seed: int = 0
    rank_tol: float = RANK_TOL  # relative to the largest singular value

    def __post_init__(self):
        if self.antennas < self.users:
            raise ValueError(f"need M >= K, got M={self.antennas}, K={self.users}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        snr = tuple(float(p) for p in self.snr)
        if any(b <= a for a, b in zip(snr, snr[1:])):
            raise ValueError("SNR grid must be strictly increasing")
        if any(p <= 0 for p in snr):
            raise ValueError("SNR values are linear powers and must be positive")
        object.__setattr__(self, "snr", snr)


@dataclass(frozen=True)
class DecodingVerdict:
    status: tuple[str, ...]  # per user: "decodable" or "rank-deficient"
    deficient_trials: tuple[int, ...]
    margin: tuple[float, ...]  # worst normalized smallest useful singular value
    trials: int

    @property
    def all_decodable(self) -> bool:
        return all(s == "decodable" for s in self.status)


def _heard_refs(expr: Expr):
    if isinstance(expr, Heard):
        yield expr
    elif isinstance(expr, Mix):
        for term in expr.terms:
            yield from _heard_refs(term)


def _sym_refs(expr: Expr):
    if isinstance(expr, Sym):
        yield expr.id
    elif isinstance(expr, Mix):
        for term in expr.terms:
            yield from _sym_refs(term)


# ---------------------------------------------------------------------------
# validation and accounting


def check_schedule(schedule: Schedule, antennas: int | None = None) -> None:
    """Raise ScheduleError on dangling references or CSIT demands above the declared pattern."""
    k = schedule.users
    for t, action in enumerate(schedule.slots):
        if not action.streams:
            raise ScheduleError(f"slot {t} transmits nothing")
        if not action.targets <= set(range(k)):
            raise ScheduleError(f"slot {t} targets unknown users {sorted(action.targets)}")
        for stream in action.streams:
            if not stream.nulls <= set(range(k)):
                raise ScheduleError(f"slot {t} zero-forces against unknown users")
            if antennas is not None and len(stream.nulls) >= antennas:
                raise ScheduleError(f"slot {t}: cannot null {len(stream.nulls)} users with M={antennas}")
            for s in _sym_refs(stream.payload):
                if not 0 <= s < len(schedule.owners):
                    raise ScheduleError(f"slot {t} references unknown symbol {s}")
            for h in _heard_refs(stream.payload):
                if not 0 <= h.user < k:
                    raise ScheduleError(f"slot {t} reuses a signal of unknown user {h.user}")
                if not h.slot < t:
                    raise ScheduleError(f"slot {t} reuses slot {h.slot}, which is not earlier")
                n_streams = len(schedule.slots[h.slot].streams)
                if h.streams is not None and any(not 0 <= i < n_streams for i in h.streams):
                    raise ScheduleError(f"slot {t} reuses missing streams of slot {h.slot}")
    if schedule.declared is not None:
        declared = schedule.declared
        if declared.users != k or declared.slots != len(schedule.slots):
            raise ScheduleError("declared pattern shape does not match the schedule")
        need = schedule.demand()
        for u in range(k):
            for t in range(len(schedule.slots)):
                want, have = need.grid[u][t], declared.grid[u][t]
                if want is CsitState.P and have is not CsitState.P:
                    raise ScheduleError(f"user {u + 1} needs perfect CSIT in slot {t + 1}, pattern has {have}")
                if want is CsitState.D and have is CsitState.N:
                    raise ScheduleError(f"user {u + 1} needs delayed CSIT in slot {t + 1}, pattern has N")


def account(schedule: Schedule) -> SchemeResult:
    check_schedule(schedule)
    counts = [0] * schedule.users
    shared = 0
    for owners in schedule.owners:
        if len(owners) == 1:
            counts[next(iter(owners))] += 1
        else:
            shared += 1
    return SchemeResult(tuple(counts), len(schedule.slots), schedule.pattern(), shared)


def introduced_per_slot(schedule: Schedule) -> list[tuple[int, ...]]:
    """Per slot and user, how many of that user's private symbols are sent for the first time."""
    seen = set()
    out = []
    for action in schedule.slots:
        row = [0] * schedule.users
        for stream in action.streams:
            for s in _sym_refs(stream.payload):
                if s not in seen:
                    seen.add(s)
                    if len(schedule.owners[s]) == 1:
                        row[next(iter(schedule.owners[s]))] += 1
        out.append(tuple(row))
    return out


def feedback_census(schedule: Schedule) -> Fraction:
    """Fed-back channels per (slot, user) entry."""
    return Fraction(len(schedule.feedback()), len(schedule.slots) * schedule.users)


def without_slot(schedule: Schedule, t: int) -> Schedule:
    """Copy with slot ``t`` removed; later slots must not reuse it."""
    for later in schedule.slots[t + 1:]:
        for stream in later.streams:
            if any(h.slot == t for h in _heard_refs(stream.payload)):
                raise ScheduleError(f"slot {t} is reused later and cannot be dropped")

    def shift(expr):
        if isinstance(expr, Heard) and expr.slot > t:
            return Heard(expr.user, expr.slot - 1, expr.streams)
        if isinstance(expr, Mix):
            return Mix(tuple(shift(e) for e in expr.terms), expr.weights)
        return expr

    slots = []
    for i, action in enumerate(schedule.slots):
        if i == t:
            continue
        streams = tuple(Stream(shift(s.payload), s.nulls) for s in action.streams)
        slots.append(SlotAction(action.kind, action.targets, streams, action.phase))
    declared = None
    if schedule.declared is not None:
        cols = [c for i, c in enumerate(schedule.declared.columns()) if i != t]
        declared = CsitPattern.from_columns(cols)
    return Schedule(schedule.users, tuple(slots), schedule.owners,
                    schedule.name + f" minus slot {t + 1}", declared, dict(schedule.ledger))


# ---------------------------------------------------------------------------
# construction helpers


class _Builder:
    def __init__(self, users: int):
        self.users = users
        self.slots: list[SlotAction] = []
        self.owners: list[frozenset[int]] = []

    def symbols(self, owners: Iterable[int], n: int) -> list[Sym]:
        owners = frozenset(owners)
        out = []
        for _ in range(n):
            out.append(Sym(len(self.owners)))
            self.owners.append(owners)
        return out

    def slot(self, kind: str, targets: Iterable[int], streams: Sequence[Stream], phase=None) -> int:
        self.slots.append(SlotAction(kind, frozenset(targets), tuple(streams), phase))
        return len(self.slots) - 1

    def zf_slot(self, users: Sequence[int], per_user: int = 1) -> int:
        streams = []
        for u in users:
            others = frozenset(users) - {u}
            for sym in self.symbols([u], per_user):
                streams.append(Stream(sym, others))
        return self.slot("zf", users, streams)

    def single_slot(self, user: int, n: int = 1) -> int:
        return self.slot("single", [user], [Stream(s) for s in self.symbols([user], n)])

    def build(self, name: str, declared: CsitPattern | None = None, ledger: dict | None = None) -> Schedule:
        schedule = Schedule(self.users, tuple(self.slots), tuple(self.owners), name, declared, ledger or {})
        check_schedule(schedule)
        return schedule


def _split_rational(x: Fraction) -> tuple[int, int]:
    return x.numerator, x.denominator


def mat_repetitions(users: int, start: int, minimal: bool = False) -> dict[int, int]:
    """Repetitions of phases start..users; default ((p-1)!(K-p)!) K per phase p."""
    reps = {p: math.factorial(p - 1) * math.factorial(users - p) * users for p in range(start, users + 1)}
    if minimal:
        g = 0
        for r in reps.values():
            g = math.gcd(g, r)
        reps = {p: r // g for p, r in reps.items()}
    return reps


def _run_mat(builder: _Builder, group: Sequence[int], start: int, reps: dict[int, int],
             pools: dict | None = None) -> list[dict]:
    """Append MAT phases start..|group| to ``builder``.

    Phase p sends, for every p-subset S of the group, |group|-p+1 order-p
    messages along generic beams; the users outside S overhear one equation
    each, and those overheard equations are mixed into order-(p+1) messages
    for S plus the overhearing user. Returns the per-phase ledger.
    """
    group = tuple(sorted(group))
    n = len(group)
    if not 1 <= start <= n:
        raise ValueError(f"start order must be in 1..{n}, got {start}")
    pools = defaultdict(deque, pools or {})
    phases = []
    for p in range(start, n + 1):
        width = n - p + 1
        consumed = produced = feedbacks = 0
        first_slot = len(builder.slots)
        for _ in range(reps[p]):
            heard = defaultdict(dict)
            for subset in combinations(group, p):
                key = frozenset(subset)
                if p == start and not pools[key]:
                    payload = builder.symbols(subset, width)
                else:
                    if len(pools[key]) < width:
                        raise ScheduleError(f"phase {p}: not enough order-{p} messages for {sorted(key)}")
                    payload = [pools[key].popleft() for _ in range(width)]
                consumed += width
                t = builder.slot("mat", subset, [Stream(e) for e in payload], phase=p)
                for r in group:
                    if r not in key:
                        heard[key | {r}][r] = Heard(r, t)
                        feedbacks += 1
            if p < n:
                for key in sorted(heard, key=sorted):
                    terms = tuple(heard[key][r] for r in sorted(key))
                    for _ in range(p):
                        pools[key].append(Mix(terms))
                        produced += 1
        phases.append({
            "phase": p,
            "repetitions": reps[p],
            "slots": len(builder.slots) - first_slot,
            "consumed": consumed,
            "produced": produced,
            "feedbacks": feedbacks,
        })
    leftover = sum(len(q) for q in pools.values())
    if leftover:
        raise ScheduleError(f"MAT ledger does not balance: {leftover} messages left over")
    return phases


def harmonic(lo: int, hi: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(lo, hi + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# schemes


def corner_scheme_case_a(users: int, lambda_p, favored: int) -> tuple[Schedule, SchemeResult]:
    """ZF to everyone in a lambda_P share of slots, then only ``favored`` (0-based)."""
    if not 0 <= favored < users:
        raise ValueError(f"favored user {favored} out of range for K={users}")
    lp = as_fraction(lambda_p)
    if not 0 <= lp <= 1:
        raise ValueError(f"lambda_P={lp} outside [0, 1]")
    zf, total = _split_rational(lp)
    b = _Builder(users)
    for _ in range(zf):
        b.zf_slot(range(users))
    for _ in range(total - zf):
        b.single_slot(favored)
    schedule = b.build(f"case-a K={users} lambda_P={fraction_str(lp)} favored={favored + 1}")
    return schedule, account(schedule)


def mat_schedule(users: int, start: int = 1, minimal: bool = False) -> Schedule:
    """K-user MAT fed with order-``start`` messages."""
    if not 1 <= start <= users:
        raise ValueError(f"start order must be in 1..{users}, got {start}")
    b = _Builder(users)
    phases = _run_mat(b, range(users), start, mat_repetitions(users, start, minimal))
    return b.build(f"mat K={users} start={start}", ledger={"phases": phases})


def mat_min_delay(users: int, start: int = 1) -> Fraction:
    """Smallest delayed-CSIT fraction MAT needs when fed order-``start`` messages."""
    if not 1 <= start <= users:
        raise ValueError(f"start order must be in 1..{users}, got {start}")
    return 1 - Fraction(users - start + 1) / (users * harmonic(start, users))


def hybrid_feasible(lambda_p, lambda_d, group_size: int) -> bool:
    lp, ld = as_fraction(lambda_p), as_fraction(lambda_d)
    ln = 1 - lp - ld
    return ln * harmonic(2, group_size) <= ld


def hybrid_corner_scheme(lambda_p, lambda_d, users: int, subset: Iterable[int]) -> tuple[Schedule, SchemeResult]:
    """ZF to all users for a lambda_P share of slots, MAT among ``subset`` for the rest."""
    lp, ld = as_fraction(lambda_p), as_fraction(lambda_d)
    if lp < 0 or ld < 0 or lp + ld > 1:
        raise ValueError(f"invalid probabilities lambda_P={lp}, lambda_D={ld}")
    group = tuple(sorted(set(subset)))
    if not group or not set(group) <= set(range(users)):
        raise ValueError(f"subset {group} is not a nonempty set of users in 0..{users - 1}")
    j = len(group)
    if not hybrid_feasible(lp, ld, j):
        raise InfeasibleScheme(
            f"lambda_N <= lambda_D / sum_(i=2..{j}) 1/i fails: "
            f"{fraction_str(1 - lp - ld)} > {fraction_str(ld)} / {fraction_str(harmonic(2, j))}"
        )
    reps = mat_repetitions(j, 1)
    frame = sum(reps[p] * math.comb(j, p) for p in reps)
    zf, den = _split_rational(lp)
    b = _Builder(users)
    for _ in range(zf * frame):
        b.zf_slot(range(users))
    ledger = {"frame": frame, "mat_frames": den - zf, "phases": []}
    for _ in range(den - zf):
        ledger["phases"].append(_run_mat(b, group, 1, reps))
    schedule = b.build(
        f"hybrid K={users} S={tuple(u + 1 for u in group)} "
        f"lambda_P={fraction_str(lp)} lambda_D={fraction_str(ld)}",
        ledger=ledger,
    )
    result = account(schedule)
    realized = result.marginals()
    for u in group:
        if realized.d(u) > ld:
            raise InfeasibleScheme(f"user {u + 1} needs delayed CSIT {realized.d(u)} > {ld}")
    return schedule, result


def hybrid_corner_dof(lambda_p, users: int, subset: Iterable[int]) -> DofPoint:
    lp = as_fraction(lambda_p)
    group = set(subset)
    j = len(group)
    inside = (1 + lp * harmonic(2, j)) / harmonic(1, j)
    return tuple(inside if u in group else lp for u in range(users))


def fig5_scheme() -> tuple[Schedule, SchemeResult]:
    """Three slots, DoF (2/3, 2/3, 1/3).

    Slot 1 sends two symbols to user 1 zero-forced at user 2, two symbols to
    user 2 zero-forced at user 1, and one symbol to user 3 zero-forced at
    both. Slots 2 and 3 resend the parts of user 3's slot-1 signal that came
    from user 1's and user 2's symbols.
    """
    b = _Builder(3)
    u1 = b.symbols([0], 2)
    u2 = b.symbols([1], 2)
    u3 = b.symbols([2], 1)
    first = b.slot("zf", [0, 1, 2], [
        Stream(u1[0], frozenset({1})),
        Stream(u1[1], frozenset({1})),
        Stream(u2[0], frozenset({0})),
        Stream(u2[1], frozenset({0})),
        Stream(u3[0], frozenset({0, 1})),
    ])
    b.slot("retransmit", [0, 2], [Stream(Heard(2, first, (0, 1)))])
    b.slot("retransmit", [1, 2], [Stream(Heard(2, first, (2, 3)))])
    schedule = b.build("fig5", declared=FIG5)
    return schedule, account(schedule)


def alternating_order2_scheme() -> tuple[Schedule, SchemeResult]:
    """Sum DoF 24/17 with one delayed-CSIT user per slot.

    Each slot sends a two-symbol vector to one user while one other user's
    channel is fed back; the two overheard equations of a user pair are
    summed into one order-2 message. Six order-2 messages then go through
    the order-2 and order-3 phases of three-user MAT in five slots.
    """
    b = _Builder(3)
    pools = defaultdict(deque)
    for _copy in range(2):
        for x, y in combinations(range(3), 2):
            tx = b.slot("single", [x], [Stream(s) for s in b.symbols([x], 2)])
            ty = b.slot("single", [y], [Stream(s) for s in b.symbols([y], 2)])
            # y overheard x's vector in tx and x overheard y's in ty
            pools[frozenset({x, y})].append(Mix((Heard(y, tx), Heard(x, ty)), (1, 1)))
    phases = _run_mat(b, range(3), 2, mat_repetitions(3, 2, minimal=True), pools)
    schedule = b.build("alternating order-2", ledger={"phases": phases})
    return schedule, account(schedule)


def single_user_scheme(users: int, user: int = 0, declared: CsitPattern | None = None,
                       slots: int | None = None) -> tuple[Schedule, SchemeResult]:
    """Serve one user in every slot; needs no CSIT."""
    n = slots if slots is not None else (declared.slots if declared is not None else 1)
    b = _Builder(users)
    for _ in range(n):
        b.single_slot(user)
    schedule = b.build(f"single-user {user + 1}", declared=declared)
    return schedule, account(schedule)


def fixed_csit_scheme() -> tuple[Schedule, SchemeResult]:
    """Single-user transmission under the fixed pattern (user 1 delayed, others unknown)."""
    return single_user_scheme(3, 0, declared=FIG2_FIXED)


def zf_pattern_scheme(pattern: CsitPattern, fallback: int = 0) -> tuple[Schedule, SchemeResult]:
    """Per slot: zero-force to every user with perfect CSIT, else serve ``fallback``."""
    b = _Builder(pattern.users)
    for col in pattern.columns():
        perfect = [u for u, s in enumerate(col) if s is CsitState.P]
        if perfect:
            b.zf_slot(perfect)
        else:
            b.single_slot(fallback)
    schedule = b.build("zf-pattern", declared=pattern)
    return schedule, account(schedule)


# ---------------------------------------------------------------------------
# Monte Carlo


def _cn(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _nullspace(rows: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of {x : rows @ x = 0}."""
    _, s, vh = np.linalg.svd(rows)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s.size else 0
    return vh[rank:].conj().T


def observations(schedule: Schedule, antennas: int, rng: np.random.Generator) -> np.ndarray:
    """Noiseless received rows, shape (users, slots, symbols), for one channel draw."""
    k, n_slots, n_sym = schedule.users, len(schedule.slots), len(schedule.owners)
    channels = _cn(rng, n_slots, k, antennas)  # row u of slot t is h_u(t)^H
    per_stream: list[list[np.ndarray]] = []
    received = np.zeros((k, n_slots, n_sym), dtype=complex)

    def value(expr) -> np.ndarray:
        if isinstance(expr, Sym):
            v = np.zeros(n_sym, dtype=complex)
            v[expr.id] = 1.0
            return v
        if isinstance(expr, Heard):
            streams = per_stream[expr.slot]
            idx = range(len(streams)) if expr.streams is None else expr.streams
            return sum(streams[i][expr.user] for i in idx)
        if expr.weights is not None:
            return sum(w * value(e) for w, e in zip(expr.weights, expr.terms))
        # generic weights; terms are put on a common scale first
        terms = [value(e) for e in expr.terms]
        weights = _cn(rng, len(terms))
        return sum(w * v / np.linalg.norm(v) for w, v in zip(weights, terms))

    for t, action in enumerate(schedule.slots):
        contributions = []
        for stream in action.streams:
            payload = value(stream.payload)
            payload = payload / np.linalg.norm(payload)  # unit transmit power per stream
            beam = _cn(rng, antennas)
            if stream.nulls:
                basis = _nullspace(channels[t, sorted(stream.nulls)])
                beam = basis @ (basis.conj().T @ beam)
            beam /= np.linalg.norm(beam)
            gains = channels[t] @ beam  # (users,)
            contributions.append(np.outer(gains, payload))
        per_stream.append(contributions)
        received[:, t, :] = sum(contributions)
    return received


def _rank(m: np.ndarray, tol: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol))


def _trial_rng(config: SchemeConfig, trial: int) -> np.random.Generator:
    return np.random.default_rng([config.seed & (2**64 - 1), trial])


def simulate_decode(schedule: Schedule, config: SchemeConfig) -> DecodingVerdict:
    """Generic-channel rank test of every user's received linear system.

    User u decodes iff its intended symbols are determined by its
    observations whatever the interfering symbols are, i.e.
    rank([G_own, G_other]) - rank(G_other) = number of own symbols.
    """
    if config.users != schedule.users:
        raise ValueError(f"config is for K={config.users}, schedule has K={schedule.users}")
    check_schedule(schedule, config.antennas)
    k = schedule.users
    own = [np.array([u in o for o in schedule.owners]) for u in range(k)]
    deficient = [0] * k
    margin = [math.inf] * k
    for trial in range(config.trials):
        rx = observations(schedule, config.antennas, _trial_rng(config, trial))
        for u in range(k):
            n_own = int(own[u].sum())
            if n_own == 0:
                continue
            g = rx[u]
            norms = np.linalg.norm(g, axis=1)
            g = g[norms > 0] / norms[norms > 0, None]  # row scaling keeps every rank
            smax = np.linalg.svd(g, compute_uv=False)[0] if g.any() else 0.0
            tol = config.rank_tol * smax
            g_own, g_other = g[:, own[u]], g[:, ~own[u]]
            gap = _rank(g, tol) - _rank(g_other, tol)
            if gap != n_own:
                deficient[u] += 1
                margin[u] = 0.0
                continue
            # smallest singular value of the own-symbol system after
            # projecting out the interference subspace
            if _rank(g_other, tol):
                q, s, _ = np.linalg.svd(g_other, full_matrices=False)
                q = q[:, s > tol]
                g_own = g_own - q @ (q.conj().T @ g_own)
            s_own = np.linalg.svd(g_own, compute_uv=False)
            margin[u] = min(margin[u], float(s_own[n_own - 1] / smax))
    status = tuple("rank-deficient" if d else "decodable" for d in deficient)
    margin = tuple(0.0 if m == math.inf else m for m in margin)
    return DecodingVerdict(status, tuple(deficient), margin, config.trials)


def rate_curve(schedule: Schedule, config: SchemeConfig) -> np.ndarray:
    """Average per-slot rate (bits) of each user at each SNR; shape (len(snr), users).

    Rate of user u is log2 det(I + P G G^H) - log2 det(I + P G_o G_o^H)
    over its noisy observations, with G_o the interference columns.
    """
    check_schedule(schedule, config.antennas)
    k, n_slots = schedule.users, len(schedule.slots)
    own = [np.array([u in o for o in schedule.owners]) for u in range(k)]
    snr = np.asarray(config.snr)
    total = np.zeros((snr.size, k))
    eye = np.eye(n_slots)
    for trial in range(config.trials):
        rx = observations(schedule, config.antennas, _trial_rng(config, trial))
        for u in range(k):
            if not own[u].any():
                continue
            g, g_o = rx[u], rx[u][:, ~own[u]]
            cov, cov_o = g @ g.conj().T, g_o @ g_o.conj().T
            for i, p in enumerate(snr):
                full = np.linalg.slogdet(eye + p * cov)[1]
                rest = np.linalg.slogdet(eye + p * cov_o)[1]
                total[i, u] += (full - rest) / np.log(2)
    return total / (config.trials * n_slots)


def rate_slope(schedule: Schedule, config: SchemeConfig) -> np.ndarray:
    """Least-squares slope of each user's rate against log2 P."""
    snr = np.asarray(config.snr)
    if snr.size < 2 or snr[-1] / snr[0] < 1e3:
        raise ValueError("SNR grid must have at least two points spanning three decades")
    rates = rate_curve(schedule, config)
    x = np.log2(snr)
    return np.array([np.polyfit(x, rates[:, u], 1)[0] for u in range(schedule.users)])


# ---------------------------------------------------------------------------
# serialization


def _expr_to_dict(expr) -> dict:
    if isinstance(expr, Sym):
        return {"symbol": expr.id}
    if isinstance(expr, Heard):
        d = {"heard": {"user": expr.user + 1, "slot": expr.slot + 1}}
        if expr.streams is not None:
            d["heard"]["streams"] = [i + 1 for i in expr.streams]
        return d
    d = {"mix": [_expr_to_dict(e) for e in expr.terms]}
    if expr.weights is not None:
        d["weights"] = [str(w) for w in expr.weights]
    return d


def schedule_to_dict(schedule: Schedule) -> dict:
    """JSON-ready view of a schedule (users and slots 1-based)."""
    return {
        "name": schedule.name,
        "users": schedule.users,
        "slots": [
            {
                "slot": t + 1,
                "kind": a.kind,
                "targets": sorted(u + 1 for u in a.targets),
                "phase": a.phase,
                "streams": [
                    {"payload": _expr_to_dict(s.payload), "zero_forced_at": sorted(u + 1 for u in s.nulls)}
                    for s in a.streams
                ],
            }
            for t, a in enumerate(schedule.slots)
        ],
        "symbols": [sorted(u + 1 for u in o) for o in schedule.owners],
        "feedback": [{"user": u + 1, "slot": t + 1} for u, t in schedule.feedback()],
        "pattern": str(schedule.pattern()).splitlines(),
        "ledger": schedule.ledger,
    }
