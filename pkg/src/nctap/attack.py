"""Leaking schedules for the MRD coset code, and the GF(4) walk-through.

For ``mu = n - k`` the candidates come from a finite family: tap the unit
rows e_1..e_mu in every slot, or do the same except that the last slot's
final row is replaced by ``gamma * e_mu + e_(mu+1)``.  If every member of
one family were leak-free, H would have to separate q^(mk) + 1 distinct
codewords using only q^(mk) syndromes, so some member always leaks.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .adversary import TapSchedule
from .analyzer import (
    CountTable,
    Enumerator,
    SecurityVerdict,
    canonical_schedules,
    count_table,
    default_budget,
    mutual_information,
    verdict_from_table,
)
from .codes import ParityCheck, gabidulin_parity_check
from .errors import BudgetExceeded, ParameterOutOfRange
from .gf import FieldSpec, field_build
from .netsim import propagate_gcvs, schedule_from_taps, three_link_network


@dataclass(frozen=True)
class UnitRowFamily:
    """Base schedule plus one twisted schedule per level in GF(q), for one shift."""

    shift: int
    base: TapSchedule
    twisted: tuple[tuple[int, TapSchedule], ...]

    def members(self) -> list[tuple[str, TapSchedule]]:
        out = [(f"shift={self.shift}/base", self.base)]
        out += [(f"shift={self.shift}/level={lv}", s) for lv, s in self.twisted]
        return out


def unit_row_family(n: int, k: int, m: int, q: int, shift: int = 0) -> UnitRowFamily:
    """Unit-row schedules; the twisted row for level ``lv`` is (lv - shift) e_mu + e_(mu+1)."""
    mu = n - k
    if mu < 1 or n < mu + 1:
        raise ParameterOutOfRange(f"need 1 <= n - k and k >= 1 (n={n}, k={k})")
    if not 0 <= shift < q:
        raise ParameterOutOfRange(f"shift {shift} is not an element of GF({q})")
    unit = np.eye(n, dtype=np.int64)[:mu]
    base = TapSchedule(q, n, mu, tuple(unit for _ in range(m)))
    twisted = []
    for level in range(q):
        gamma = (level - shift) % q
        last = unit.copy()
        last[mu - 1] = 0
        last[mu - 1, mu - 1] = gamma
        last[mu - 1, mu] = 1
        blocks = tuple(unit for _ in range(m - 1)) + (last,)
        twisted.append((level, TapSchedule(q, n, mu, blocks)))
    return UnitRowFamily(shift, base, tuple(twisted))


@dataclass(frozen=True)
class AttackWitness:
    pc: ParityCheck
    schedule: TapSchedule
    observation: tuple[int, ...]
    syndromes: tuple
    counts: tuple[int, int]
    leakage_bits: float
    strategy: str
    label: str

    def replay_command(self) -> str:
        field_cfg = json.dumps(self.pc.field.to_config(), separators=(",", ":"))
        code_cfg = json.dumps(self.pc.to_config(), separators=(",", ":"))
        sched_cfg = json.dumps(self.schedule.to_config(), separators=(",", ":"))
        return f"nctap analyze --field '{field_cfg}' --code '{code_cfg}' --schedule '{sched_cfg}'"

    def to_dict(self) -> dict:
        s, s_prime = self.syndromes
        return {
            "schedule": self.schedule.to_config(),
            "observation": list(self.observation),
            "syndromes": [[list(e.coeffs) for e in s], [list(e.coeffs) for e in s_prime]],
            "counts": list(self.counts),
            "leakage_bits": self.leakage_bits,
            "strategy": self.strategy,
            "label": self.label,
            "replay": self.replay_command(),
        }


def _verify(pc: ParityCheck, sched: TapSchedule, verdict: SecurityVerdict, basis, budget) -> None:
    # fresh enumeration, no shared cache with the search
    table = count_table(pc, sched, basis=basis, budget=budget)
    w = verdict.witness
    if table.N(w.s, w.w) == table.N(w.s_prime, w.w):
        raise AssertionError("witness did not reproduce on re-count")
    if mutual_information(table) != verdict.leakage_bits:
        raise AssertionError("leakage changed on re-count")


def _make(pc, sched, verdict, strategy, label) -> AttackWitness:
    w = verdict.witness
    return AttackWitness(
        pc, sched, w.w, (w.s, w.s_prime), (w.count_s, w.count_s_prime), verdict.leakage_bits, strategy, label
    )


def _scan(engine: Enumerator, candidates, workers: int):
    """First leaking candidate by position, analysing up to ``workers`` at a time."""
    candidates = list(candidates)
    step = max(workers, 1)
    for start in range(0, len(candidates), step):
        batch = candidates[start:start + step]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                verdicts = list(pool.map(lambda c: verdict_from_table(engine.count(c[1]), c[1]), batch))
        else:
            verdicts = [verdict_from_table(engine.count(c[1]), c[1]) for c in batch]
        for (label, sched), v in zip(batch, verdicts):
            if not v.secure:
                return label, sched, v
    return None


def find_witness(
    pc: ParityCheck,
    mu: int | None = None,
    *,
    basis: np.ndarray | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> AttackWitness:
    """A verified leaking schedule with ``mu`` taps per slot (default ``n - k``).

    ``mu = n - k`` scans the unit-row families over every shift.  Smaller
    ``mu`` first tries row subsets of that witness, then every canonical
    schedule in search order.
    """
    budget = default_budget() if budget is None else budget
    field = pc.field
    q, m, n, k = field.p, field.m, pc.n, pc.k
    full = n - k
    mu = full if mu is None else mu
    if not 1 <= mu <= full:
        raise ParameterOutOfRange(f"need 1 <= mu <= n - k = {full}")
    engine = Enumerator(pc, basis, budget)

    family = [c for shift in range(q) for c in unit_row_family(n, k, m, q, shift).members()]
    hit = _scan(engine, family, workers)
    if hit is None:
        raise AssertionError("no member of the unit-row families leaks; H cannot have rank k")
    label, sched, verdict = hit
    if mu == full:
        _verify(pc, sched, verdict, basis, budget)
        return _make(pc, sched, verdict, "family", label)

    def subsets():
        rows = list(itertools.combinations(range(full), mu))
        for picks in itertools.product(rows, repeat=m):
            blocks = tuple(B[list(r)] for B, r in zip(sched.blocks, picks))
            yield f"rows={list(map(list, picks))} of {label}", TapSchedule(q, n, mu, blocks)

    hit = _scan(engine, subsets(), workers)
    if hit is not None:
        label, sub, verdict = hit
        _verify(pc, sub, verdict, basis, budget)
        return _make(pc, sub, verdict, "row-subset", label)

    spent = 0
    for i, cand in enumerate(canonical_schedules(q, m, mu, n)):
        spent += engine.total
        if spent > budget:
            raise BudgetExceeded(f"exhaustive search passed the budget of {budget} evaluations")
        v = verdict_from_table(engine.count(cand), cand)
        if not v.secure:
            _verify(pc, cand, v, basis, budget)
            return _make(pc, cand, v, "exhaustive", f"canonical #{i}")
    raise AssertionError("exhaustive search found no leaking schedule")


# -- the GF(4) example --

EXAMPLE_FIELD = (2, 2, (1, 1, 1))
# schedule of the walk-through: slot 1 taps X1, slot 2 taps X1 + X2
EXAMPLE_TAPS = (("e1",), ("e3",))
EXAMPLE_OBSERVATION = (0, 1)


@dataclass(frozen=True)
class ExampleRow:
    x: tuple[int, ...]
    links: tuple[int, ...]
    syndrome: int


@dataclass
class ExampleReport:
    field: FieldSpec
    pc: ParityCheck
    link_ids: tuple[str, ...]
    rows: list[ExampleRow]
    schedule: TapSchedule
    table: CountTable
    observation: tuple[int, ...]
    candidates: list[tuple[str, int]]
    leakage_bits: float
    static_leakage: dict[str, float]
    checks: list[tuple[str, bool]]

    def cell(self, v: int, marks: tuple[int, ...] = ()) -> str:
        coords = [f"[{c}]" if i + 1 in marks else str(c) for i, c in enumerate(self.field.coords(v))]
        return f"{self.field.format_power(v)} =({','.join(coords)})"

    def table_lines(self) -> list[str]:
        """Codeword table; tapped coordinates matching the observation are bracketed."""
        tapped = {}
        for t, links in enumerate(EXAMPLE_TAPS, start=1):
            for lid in links:
                tapped[(lid, t)] = self.observation[t - 1]
        head = [f"X{i + 1}" for i in range(self.pc.n)] + ["X1 + X2", "S"]
        lines = [" | ".join(head)]
        for row in self.rows:
            cells = []
            for j, v in enumerate(row.x):
                lid = self.link_ids[j]
                marks = tuple(t for (l, t), val in tapped.items() if l == lid and self.field.coordinate(v, t) == val)
                cells.append(self.cell(v, marks))
            v = row.links[-1]
            lid = self.link_ids[-1]
            marks = tuple(t for (l, t), val in tapped.items() if l == lid and self.field.coordinate(v, t) == val)
            cells.append(self.cell(v, marks))
            cells.append(self.field.format_power(row.syndrome))
            lines.append(" | ".join(cells))
        return lines

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_config(),
            "code": self.pc.to_config(),
            "schedule": self.schedule.to_config(),
            "observation": list(self.observation),
            "candidates": [[p, c] for p, c in self.candidates],
            "leakage_bits": self.leakage_bits,
            "static_leakage": self.static_leakage,
            "table": [
                {
                    "x": [self.cell(v) for v in r.x],
                    "links": [self.cell(v) for v in r.links],
                    "S": self.field.format_power(r.syndrome),
                }
                for r in self.rows
            ],
            "checks": [{"name": name, "passed": passed} for name, passed in self.checks],
        }


def reproduce_gf4_example(strict: bool = True) -> ExampleReport:
    """Rebuild the GF(4) walk-through and check its stated properties.

    With ``strict`` an :class:`AssertionError` is raised on the first
    failed check; otherwise the failures are only recorded.
    """
    p, m, poly = EXAMPLE_FIELD
    field = field_build(p, m, poly)
    pc = gabidulin_parity_check(field, 2, 1)
    net = three_link_network(p)
    gcvs = propagate_gcvs(net)
    link_ids = ("e1", "e2", "e3")

    rows = []
    for x in itertools.product(range(field.order), repeat=2):
        values = []
        for lid in link_ids:
            acc = 0
            for b, xj in zip(gcvs.gcv(lid), x):
                acc = field.add(acc, field.scalar_mul(b, xj))
            values.append(acc)
        s = field.add(field.mul(pc.H[0][0], x[0]), field.mul(pc.H[0][1], x[1]))
        rows.append(ExampleRow(x, tuple(values), s))

    sched = schedule_from_taps(gcvs, EXAMPLE_TAPS)
    table = count_table(pc, sched)
    cands = [(field.format_power(s[0].value), c) for s, c in table.candidates(EXAMPLE_OBSERVATION)]
    leak = mutual_information(table)
    static = {}
    for lid in link_ids:
        st = schedule_from_taps(gcvs, ((lid,), (lid,)))
        static[lid] = mutual_information(count_table(pc, st))

    multiset = sorted(field.format_power(r.syndrome) for r in rows
                      if field.coordinate(r.links[0], 1) == 0 and field.coordinate(r.links[2], 2) == 1)
    checks = [
        ("H = [1, alpha]", pc.H == ((1, field.power(1)),)),
        ("16 rows", len(rows) == 16),
        ("S = X1 + alpha X2 on every row",
         all(r.syndrome == field.add(r.x[0], field.mul(field.power(1), r.x[1])) for r in rows)),
        ("observation (0,1) leaves syndromes {α^0, α^0, α^1, α^1}", multiset == ["α^0", "α^0", "α^1", "α^1"]),
        ("count table agrees: candidates α^0 and α^1 twice each", cands == [("α^0", 2), ("α^1", 2)]),
        ("I(S;W) > 0 for the re-selecting tapper", leak > 0),
        ("fixed taps leak nothing", all(v == 0.0 for v in static.values())),
    ]
    report = ExampleReport(field, pc, link_ids, rows, sched, table, EXAMPLE_OBSERVATION, cands, leak, static, checks)
    if strict:
        for name, passed in checks:
            if not passed:
                raise AssertionError(f"GF(4) example check failed: {name}")
    return report
