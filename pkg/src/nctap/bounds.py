"""Security against tappers that are active in only m' of the m slots.

:func:`classify` maps ``(n, k, m, mu, m')`` to Secure / Insecure / Unknown
with a fixed rule order.  Rule 4 is the counting condition: a fiber of the
observation must hold at least one codeword per syndrome, so the tapper's
total rank ``m' * min(mu, n)`` may not exceed ``m (n - k)``.  The
uncapped form, ``mu * m' <= m (n - k)`` together with ``mu <= n - 1``, is
available with ``uncapped=True``; it treats the slot rank as ``mu`` even
when ``mu > n``, and exhaustive checks refute it there (see
:func:`cross_validate`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .analyzer import universal_m_strong_secure
from .codes import ParityCheck
from .errors import InvalidQuery


class Verdict(str, Enum):
    SECURE = "Secure"
    INSECURE = "Insecure"
    UNKNOWN = "Unknown"


RULES = {
    "R1": "mu = 1 and m' <= n - k",
    "R2": "m' = 1 and mu <= n - k",
    "R3": "m' = m",
    "R4": "m' min(mu, n) > m (n - k)",
    "R4-uncapped": "mu m' > m (n - k) or mu > n - 1",
    "R5": "no rule applies",
}


@dataclass(frozen=True)
class RegionQuery:
    n: int
    k: int
    m: int
    mu: int
    duration: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise InvalidQuery(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.m < self.n:
            raise InvalidQuery(f"the coding scheme needs m >= n, got m={self.m}, n={self.n}")
        if self.mu < 1:
            raise InvalidQuery("need mu >= 1")
        if not 1 <= self.duration <= self.m:
            raise InvalidQuery(f"need 1 <= m' <= m, got m'={self.duration}, m={self.m}")

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "m": self.m, "mu": self.mu, "duration": self.duration}


@dataclass(frozen=True)
class RegionVerdict:
    verdict: Verdict
    rule: str

    @property
    def description(self) -> str:
        return RULES[self.rule]


def classify(query: RegionQuery, uncapped: bool = False) -> RegionVerdict:
    n, k, m, mu, d = query.n, query.k, query.m, query.mu, query.duration
    if mu == 1 and d <= n - k:
        return RegionVerdict(Verdict.SECURE, "R1")
    if d == 1 and mu <= n - k:
        return RegionVerdict(Verdict.SECURE, "R2")
    if d == m:
        return RegionVerdict(Verdict.INSECURE, "R3")
    if uncapped:
        if mu * d > m * (n - k) or mu > n - 1:
            return RegionVerdict(Verdict.INSECURE, "R4-uncapped")
    elif min(mu, n) * d > m * (n - k):
        return RegionVerdict(Verdict.INSECURE, "R4")
    return RegionVerdict(Verdict.UNKNOWN, "R5")


@dataclass(frozen=True)
class CrossValidation:
    query: RegionQuery
    predicted: RegionVerdict
    empirical_secure: bool
    leakage_bits: float
    schedules_checked: int
    witness_schedule: dict | None

    @property
    def consistent(self) -> bool:
        """Secure predictions must see no leak, Insecure ones must see one."""
        if self.predicted.verdict is Verdict.SECURE:
            return self.empirical_secure
        if self.predicted.verdict is Verdict.INSECURE:
            return not self.empirical_secure
        return True

    def to_dict(self) -> dict:
        return {
            **self.query.to_dict(),
            "predicted": self.predicted.verdict.value,
            "rule": self.predicted.rule,
            "empirical": "Secure" if self.empirical_secure else "Insecure",
            "leakage_bits": self.leakage_bits,
            "schedules_checked": self.schedules_checked,
            "consistent": self.consistent,
            "witness_schedule": self.witness_schedule,
        }


def cross_validate(pc: ParityCheck, query: RegionQuery, *, uncapped: bool = False, budget: int | None = None,
                   workers: int = 1) -> CrossValidation:
    """Exhaustively analyse every schedule with m - m' inactive slots and compare."""
    if (pc.n, pc.k, pc.field.m) != (query.n, query.k, query.m):
        raise InvalidQuery(f"code (n={pc.n}, k={pc.k}, m={pc.field.m}) does not match the query")
    predicted = classify(query, uncapped)
    v = universal_m_strong_secure(pc, query.mu, duration=query.duration, budget=budget, workers=workers)
    return CrossValidation(
        query, predicted, v.secure, v.leakage_bits, v.schedules_checked,
        v.schedule.to_config() if v.schedule is not None and not v.secure else None,
    )


def region_grid(n: int, k: int, m: int, max_mu: int | None = None, uncapped: bool = False) -> list[tuple[RegionQuery, RegionVerdict]]:
    """classify over mu = 1..max_mu (default n + 1) and m' = 1..m."""
    max_mu = n + 1 if max_mu is None else max_mu
    out = []
    for mu in range(1, max_mu + 1):
        for d in range(1, m + 1):
            q = RegionQuery(n, k, m, mu, d)
            out.append((q, classify(q, uncapped)))
    return out


def format_grid(grid: list[tuple[RegionQuery, RegionVerdict]]) -> str:
    mus = sorted({q.mu for q, _ in grid})
    ds = sorted({q.duration for q, _ in grid})
    cell = {(q.mu, q.duration): f"{v.verdict.value[0]}:{v.rule}" for q, v in grid}
    width = max(len(c) for c in cell.values()) + 2
    lines = ["mu \\ m'" + "".join(f"{d:>{width}}" for d in ds)]
    for mu in mus:
        lines.append(f"{mu:<7}" + "".join(f"{cell[(mu, d)]:>{width}}" for d in ds))
    return "\n".join(lines)
