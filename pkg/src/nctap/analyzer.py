"""Exact leakage analysis by enumerating every codeword.

For a parity check H and a tap schedule, :func:`count_table` records

    N[s, w] = #{x in GF(q^m)^n : Hx = s, B~ x-bar = w}

for every syndrome s and every observation w that occurs.  Since the coset
encoder makes X uniform over GF(q^m)^n, these counts are the joint
distribution of (S, W) up to the factor q^(mn), and everything else here is
derived from them.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .adversary import TapSchedule, block_diag, flatten, unflatten
from .codes import DEFAULT_BUDGET, ParityCheck, syndrome_decode
from .errors import BudgetExceeded, DimensionMismatch, PreconditionViolated
from .gf import FieldElement

BUDGET_ENV = "NCTAP_BUDGET"
CHUNK = 1 << 16
# dense tables larger than this many cells are refused
MAX_TABLE_CELLS = 1 << 27


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def syndrome_linear_map(pc: ParityCheck, basis: np.ndarray | None = None) -> np.ndarray:
    """The GF(q)-matrix of x-bar -> flatten(Hx), shape (m k) x (m n)."""
    field = pc.field
    dim = field.m * pc.n
    S = np.zeros((field.m * pc.k, dim), dtype=np.int64)
    for j in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[j] = 1
        x = unflatten(e, field, pc.n, basis)
        S[:, j] = flatten(syndrome_decode(x, pc), field)
    return S


class Enumerator:
    """Walks all of GF(q^m)^n once per schedule, reusing schedule-free work.

    Codeword number ``i`` is the x whose flattened vector x-bar, read as a
    base-q numeral with the first entry most significant, equals ``i``.
    """

    def __init__(self, pc: ParityCheck, basis: np.ndarray | None = None, budget: int | None = None):
        budget = default_budget() if budget is None else budget
        field = pc.field
        self.pc = pc
        self.q = field.p
        self.m = field.m
        self.dim = field.m * pc.n
        self.total = self.q**self.dim
        if self.total > budget:
            raise BudgetExceeded(f"enumerating {self.total} codewords exceeds the budget of {budget}")
        self.budget = budget
        self.basis = basis
        self.num_syndromes = field.order**pc.k
        self._smap = syndrome_linear_map(pc, basis)
        # position (t, j) of flatten(s) carries coordinate t+1 of s_j
        self._s_weights = np.array(
            [self.q ** (self.m - 1 - t) * field.order ** (pc.k - 1 - j) for t in range(self.m) for j in range(pc.k)],
            dtype=np.int64,
        )
        self._places = self.q ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        self._cache: tuple[np.ndarray, np.ndarray] | None = None
        if self.total * max(self.dim, 1) <= 1 << 26:
            self._cache = self._compute(0, self.total)

    def _compute(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        idx = np.arange(start, stop, dtype=np.int64)
        xbar = (idx[:, None] // self._places) % self.q
        s_idx = (xbar @ self._smap.T % self.q) @ self._s_weights if self.pc.k else np.zeros(len(idx), dtype=np.int64)
        return xbar, s_idx

    def chunk(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        if self._cache is not None:
            xbar, s_idx = self._cache
            return xbar[start:stop], s_idx[start:stop]
        return self._compute(start, stop)

    def partitions(self, parts: int) -> list[tuple[int, int]]:
        step = max(CHUNK, -(-self.total // max(parts, 1)))
        return [(a, min(a + step, self.total)) for a in range(0, self.total, step)]

    def _partial(self, Bt: np.ndarray, start: int, stop: int) -> Counter:
        out: Counter = Counter()
        for a in range(start, stop, CHUNK):
            xbar, s_idx = self.chunk(a, min(a + CHUNK, stop))
            w = xbar @ Bt.T % self.q
            wide = w.shape[1] * math.log2(self.q) + self.pc.k * self.m * math.log2(self.q) > 62
            if not wide:
                w_places = self.q ** np.arange(w.shape[1] - 1, -1, -1, dtype=np.int64)
                keys = (w @ w_places) * self.num_syndromes + s_idx
                uniq, cnt = np.unique(keys, return_counts=True)
                for key, c in zip(uniq.tolist(), cnt.tolist()):
                    wk, s = divmod(key, self.num_syndromes)
                    out[(self._w_tuple(wk, w.shape[1]), s)] += c
            else:
                rows = np.hstack([w, s_idx[:, None]])
                uniq, cnt = np.unique(rows, axis=0, return_counts=True)
                for row, c in zip(uniq.tolist(), cnt.tolist()):
                    out[(tuple(row[:-1]), row[-1])] += c
        return out

    def _w_tuple(self, key: int, length: int) -> tuple[int, ...]:
        digits = []
        for _ in range(length):
            key, d = divmod(key, self.q)
            digits.append(d)
        return tuple(reversed(digits))

    def count(self, sched: TapSchedule, workers: int = 1, parts: int | None = None) -> CountTable:
        field = self.pc.field
        if sched.q != self.q or sched.m != self.m or sched.n != self.pc.n:
            raise DimensionMismatch(
                f"schedule (q={sched.q}, m={sched.m}, n={sched.n}) does not fit the code "
                f"(q={self.q}, m={self.m}, n={self.pc.n})"
            )
        Bt = block_diag(sched)
        ranges = self.partitions(parts if parts is not None else workers)
        if workers > 1 and len(ranges) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                partials = list(pool.map(lambda r: self._partial(Bt, *r), ranges))
        else:
            partials = [self._partial(Bt, *r) for r in ranges]
        return CountTable.from_counter(field, self.pc.n, self.pc.k, sched.mu, merge_counts(partials), self.total)


def merge_counts(partials: Sequence[Counter]) -> Counter:
    """Sum partial tables; order of the partials does not matter."""
    total: Counter = Counter()
    for part in partials:
        total.update(part)
    return total


@dataclass(frozen=True)
class Witness:
    """An observation w under which two syndromes have different counts."""

    w: tuple[int, ...]
    s: tuple[FieldElement, ...]
    s_prime: tuple[FieldElement, ...]
    count_s: int
    count_s_prime: int

    def to_dict(self) -> dict:
        return {
            "w": list(self.w),
            "s": [list(e.coeffs) for e in self.s],
            "s_prime": [list(e.coeffs) for e in self.s_prime],
            "count_s": self.count_s,
            "count_s_prime": self.count_s_prime,
        }


@dataclass(frozen=True)
class CountTable:
    """N[s, w] for every observed w (rows) and every syndrome s (columns).

    Syndromes are ordered lexicographically by their element integers;
    observations lexicographically as GF(q) vectors.
    """

    field: object
    n: int
    k: int
    mu: int
    w_values: tuple[tuple[int, ...], ...]
    counts: np.ndarray
    total: int

    @classmethod
    def from_counter(cls, field, n, k, mu, counter: Counter, total: int) -> CountTable:
        ws = sorted({w for w, _ in counter})
        num_s = field.order**k
        if len(ws) * num_s > MAX_TABLE_CELLS:
            raise BudgetExceeded(f"count table of {len(ws)} x {num_s} cells is too large")
        row = {w: i for i, w in enumerate(ws)}
        counts = np.zeros((len(ws), num_s), dtype=np.int64)
        for (w, s), c in counter.items():
            counts[row[w], s] = c
        counts.setflags(write=False)
        return cls(field, n, k, mu, tuple(ws), counts, total)

    @property
    def num_syndromes(self) -> int:
        return self.counts.shape[1]

    def syndrome(self, index: int) -> tuple[FieldElement, ...]:
        Q = self.field.order
        out = []
        for _ in range(self.k):
            index, v = divmod(index, Q)
            out.append(FieldElement(self.field, v))
        return tuple(reversed(out))

    def syndrome_index(self, s: Sequence[FieldElement | int]) -> int:
        idx = 0
        for v in s:
            idx = idx * self.field.order + int(v)
        return idx

    def row(self, w: Sequence[int]) -> np.ndarray:
        try:
            return self.counts[self.w_values.index(tuple(int(v) for v in w))]
        except ValueError:
            return np.zeros(self.num_syndromes, dtype=np.int64)

    def N(self, s: Sequence[FieldElement | int], w: Sequence[int]) -> int:
        return int(self.row(w)[self.syndrome_index(s)])

    def fiber_sizes(self) -> dict[tuple[int, ...], int]:
        """|X_w| for every observed w."""
        return dict(zip(self.w_values, self.counts.sum(axis=1).tolist()))

    def syndrome_totals(self) -> np.ndarray:
        """sum over w of N[s, w], indexed by syndrome."""
        return self.counts.sum(axis=0)

    def candidates(self, w: Sequence[int]) -> list[tuple[tuple[FieldElement, ...], int]]:
        """Syndromes consistent with observation w, with multiplicities."""
        r = self.row(w)
        return [(self.syndrome(i), int(c)) for i, c in enumerate(r) if c]

    def is_uniform(self) -> bool:
        return bool(np.all(self.counts == self.counts[:, :1]))

    def witness(self, prefer_w: Sequence[int] | None = None) -> Witness | None:
        """First non-uniform observation, or ``prefer_w`` when it is non-uniform.

        The pair is (first syndrome of maximal count, last syndrome of minimal
        count) in syndrome order.
        """
        order = list(range(len(self.w_values)))
        if prefer_w is not None and tuple(prefer_w) in self.w_values:
            first = self.w_values.index(tuple(prefer_w))
            order.remove(first)
            order.insert(0, first)
        for i in order:
            r = self.counts[i]
            if r.min() == r.max():
                continue
            hi = int(np.argmax(r))
            lo = len(r) - 1 - int(np.argmin(r[::-1]))
            return Witness(self.w_values[i], self.syndrome(hi), self.syndrome(lo), int(r[hi]), int(r[lo]))
        return None

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.field.p},{self.field.m},{self.n},{self.k},{self.mu}\n".encode())
        for w, r in zip(self.w_values, self.counts):
            h.update((",".join(map(str, w)) + ":" + ",".join(map(str, r.tolist())) + "\n").encode())
        return h.hexdigest()


def count_table(
    pc: ParityCheck,
    sched: TapSchedule,
    *,
    basis: np.ndarray | None = None,
    budget: int | None = None,
    workers: int = 1,
    parts: int | None = None,
) -> CountTable:
    """Exact N[s, w] by iterating over every x in GF(q^m)^n."""
    return Enumerator(pc, basis, budget).count(sched, workers=workers, parts=parts)


def mutual_information(table: CountTable) -> float:
    """I(S; W) in bits for uniform X, computed from the counts.

    Terms whose ratio N * total / (N_s * N_w) is exactly 1 contribute an
    exact zero, so a uniform table yields 0.0 rather than rounding noise.
    """
    T = table.total
    n_s = table.syndrome_totals().tolist()
    terms = []
    for r in table.counts.tolist():
        n_w = sum(r)
        for s, c in enumerate(r):
            if c == 0:
                continue
            num, den = c * T, n_s[s] * n_w
            if num == den:
                continue
            terms.append(c / T * (math.log2(num) - math.log2(den)))
    return max(math.fsum(terms), 0.0)


@dataclass(frozen=True)
class SecurityVerdict:
    secure: bool
    leakage_bits: float
    witness: Witness | None
    schedule: TapSchedule | None = None
    counts_digest: str | None = None
    flags: tuple[str, ...] = ()
    schedules_checked: int = 0

    def to_dict(self) -> dict:
        return {
            "secure": self.secure,
            "leakage_bits": self.leakage_bits,
            "witness": self.witness.to_dict() if self.witness else None,
            "schedule": self.schedule.to_config() if self.schedule is not None else None,
            "counts_digest": self.counts_digest,
            "flags": list(self.flags),
            "schedules_checked": self.schedules_checked,
        }


def schedule_flags(sched: TapSchedule) -> tuple[str, ...]:
    flags = []
    if sched.inactive:
        flags.append("inactive-slots")
    if not sched.active_full_rank():
        flags.append("rank-deficient-active-slot")
    return tuple(flags)


def verdict_from_table(table: CountTable, sched: TapSchedule | None = None, prefer_w=None) -> SecurityVerdict:
    uniform = table.is_uniform()
    mi = mutual_information(table)
    if uniform != (mi == 0.0):
        raise AssertionError(f"count uniformity ({uniform}) disagrees with mutual information {mi}")
    return SecurityVerdict(
        secure=uniform,
        leakage_bits=mi,
        witness=None if uniform else table.witness(prefer_w),
        schedule=sched,
        counts_digest=table.digest(),
        flags=schedule_flags(sched) if sched is not None else (),
        schedules_checked=1,
    )


def check_uniform_counts(
    pc: ParityCheck,
    sched: TapSchedule,
    *,
    basis: np.ndarray | None = None,
    prefer_w: Sequence[int] | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> SecurityVerdict:
    """Secure iff every observation leaves all syndromes equally likely."""
    table = count_table(pc, sched, basis=basis, budget=budget, workers=workers)
    return verdict_from_table(table, sched, prefer_w)


def check_fiber_injectivity(pc: ParityCheck, sched: TapSchedule, *, basis: np.ndarray | None = None) -> bool:
    """Is x -> Hx injective on every fiber {x : B~ x-bar = w}?

    Two points of one fiber share a syndrome exactly when their difference
    lies in ker B~ and in ker H, so this is a rank test on the stacked
    GF(q) matrix and needs no enumeration.  Only meaningful when
    ``mu = n - k`` and every slot has full rank.
    """
    if sched.mu != pc.n - pc.k:
        raise PreconditionViolated(f"needs mu = n - k = {pc.n - pc.k}, got mu={sched.mu}")
    if sched.inactive or not sched.active_full_rank():
        raise PreconditionViolated("needs every B_t to have full rank mu")
    stacked = np.vstack([block_diag(sched), syndrome_linear_map(pc, basis)])
    return linalg.rank_mod(stacked, pc.field.p) == pc.field.m * pc.n


# -- schedule search --

def slot_matrices(q: int, mu: int, n: int) -> list[np.ndarray]:
    """Canonical per-slot matrices: RREF row spaces of dimension min(mu, n), zero-padded to mu rows."""
    r = min(mu, n)
    out = []
    for M in linalg.rref_matrices(q, r, n):
        B = np.zeros((mu, n), dtype=np.int64)
        B[:r] = M
        out.append(B)
    return out


def count_schedules(q: int, m: int, mu: int, n: int, duration: int | None = None) -> int:
    duration = m if duration is None else duration
    return math.comb(m, duration) * linalg.count_subspaces(q, min(mu, n), n) ** duration


def canonical_schedules(q: int, m: int, mu: int, n: int, duration: int | None = None) -> Iterator[TapSchedule]:
    """Every schedule up to row operations within a slot.

    With ``duration < m`` the inactive slots range over all subsets of size
    ``m - duration``.  Leakage only grows with the row space, so maximal
    (dimension ``min(mu, n)``) slots are enough to decide security.
    """
    duration = m if duration is None else duration
    choices = slot_matrices(q, mu, n)
    zero = np.zeros((mu, n), dtype=np.int64)
    for active in itertools.combinations(range(1, m + 1), duration):
        inactive = frozenset(set(range(1, m + 1)) - set(active))
        for picks in itertools.product(choices, repeat=duration):
            blocks = [zero] * m
            for t, B in zip(active, picks):
                blocks[t - 1] = B
            yield TapSchedule(q, n, mu, tuple(blocks), inactive)


def universal_m_strong_secure(
    pc: ParityCheck,
    mu: int,
    *,
    duration: int | None = None,
    basis: np.ndarray | None = None,
    budget: int | None = None,
    workers: int = 1,
    exhaustive: bool = False,
) -> SecurityVerdict:
    """Check zero leakage for every schedule of ``mu`` taps per slot.

    Returns the first leaking schedule as witness.  ``exhaustive=True`` keeps
    going and reports the largest leakage seen instead.
    """
    budget = default_budget() if budget is None else budget
    field = pc.field
    q, m = field.p, field.m
    if mu == 0:
        return SecurityVerdict(True, 0.0, None, TapSchedule.zero(m, 0, pc.n, q), schedules_checked=0)
    work = count_schedules(q, m, mu, pc.n, duration) * q ** (m * pc.n)
    if work > budget:
        raise BudgetExceeded(f"{work} codeword evaluations exceed the budget of {budget}")
    engine = Enumerator(pc, basis, budget)
    worst: SecurityVerdict | None = None
    checked = 0
    for sched in canonical_schedules(q, m, mu, pc.n, duration):
        checked += 1
        v = verdict_from_table(engine.count(sched, workers=workers), sched)
        if not v.secure:
            if worst is None or v.leakage_bits > worst.leakage_bits:
                worst = v
            if not exhaustive:
                break
    if worst is None:
        flags = ("rank-deficient-active-slot",) if mu > pc.n else ()
        return SecurityVerdict(True, 0.0, None, None, flags=flags, schedules_checked=checked)
    return SecurityVerdict(
        False, worst.leakage_bits, worst.witness, worst.schedule, worst.counts_digest, worst.flags, checked
    )
