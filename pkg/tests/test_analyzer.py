from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from nctap import analyzer
from nctap.adversary import TapSchedule, observe_slotwise
from nctap.analyzer import check_uniform_counts, check_fiber_injectivity, count_table, mutual_information, universal_m_strong_secure
from nctap.codes import gabidulin_parity_check, parity_check
from nctap.errors import BudgetExceeded, DimensionMismatch, PreconditionViolated
from nctap.gf import basis_change_matrix, field_build


def oracle_counts(pc, sched):
    """Pure-Python N[(s, w)] through the slotwise observation route."""
    f = pc.field
    out = Counter()
    for x in itertools.product(range(f.order), repeat=pc.n):
        s = []
        for row in pc.H:
            acc = 0
            for h, xj in zip(row, x):
                acc = f.add(acc, f.mul(h, xj))
            s.append(acc)
        out[(tuple(s), tuple(observe_slotwise(sched, x, f).tolist()))] += 1
    return out


def oracle_mi(counts):
    total = sum(counts.values())
    ns, nw = Counter(), Counter()
    for (s, w), c in counts.items():
        ns[s] += c
        nw[w] += c
    acc = 0.0
    for (s, w), c in counts.items():
        ratio = Fraction(c * total, ns[s] * nw[w])
        if ratio != 1:
            acc += c / total * math.log2(ratio)
    return acc


def static(rows, m, q=2):
    return TapSchedule.static(np.array(rows), m, q)


def two_slot(b1, b2, q=2):
    return TapSchedule.from_blocks([np.array(b1), np.array(b2)], q)


@pytest.fixture(scope="module")
def gf4_pc():
    return gabidulin_parity_check(field_build(2, 2, [1, 1, 1]), 2, 1)


def random_schedules(rng, q, m, mu, n, count):
    return [TapSchedule(q, n, mu, tuple(rng.integers(0, q, size=(mu, n)) for _ in range(m))) for _ in range(count)]


CODES = [((2, 2, [1, 1, 1]), 2, 1), ((2, 3, [1, 1, 0, 1]), 2, 1), ((2, 3, [1, 1, 0, 1]), 3, 1), ((2, 3, [1, 1, 0, 1]), 3, 2)]


@pytest.mark.parametrize("fspec,n,k", CODES)
def test_counts_match_oracle(fspec, n, k, rng):
    pc = gabidulin_parity_check(field_build(*fspec), n, k)
    m = fspec[1]
    for mu in range(1, n + 1):
        for sched in random_schedules(rng, 2, m, mu, n, 3):
            table = count_table(pc, sched)
            want = oracle_counts(pc, sched)
            got = Counter()
            for w, r in zip(table.w_values, table.counts.tolist()):
                for si, c in enumerate(r):
                    if c:
                        got[(tuple(e.value for e in table.syndrome(si)), w)] = c
            assert got == want
            assert mutual_information(table) == pytest.approx(oracle_mi(want), abs=1e-12)


def test_gf4_counts(gf4_pc):
    table = count_table(gf4_pc, two_slot([[1, 0]], [[1, 1]]))
    assert [(s[0].value, c) for s, c in table.candidates((0, 1))] == [(1, 2), (2, 2)]
    assert table.N([3], (0, 1)) == 0
    assert mutual_information(table) == 1.0


@pytest.mark.parametrize("row", [[1, 0], [0, 1], [1, 1]])
def test_static_rows_leak_exactly_zero(gf4_pc, row):
    table = count_table(gf4_pc, static([row], 2))
    assert table.is_uniform()
    assert mutual_information(table) == 0.0
    assert set(table.fiber_sizes().values()) == {4}


def test_marginals(rng):
    f = field_build(2, 3, [1, 1, 0, 1])
    pc = gabidulin_parity_check(f, 3, 1)
    for sched in random_schedules(rng, 2, 3, 2, 3, 10):
        table = count_table(pc, sched)
        assert table.syndrome_totals().tolist() == [2 ** (3 * 2)] * 8
        assert sum(table.fiber_sizes().values()) == 2**9
        B = analyzer.block_diag(sched)
        r = analyzer.linalg.rank_mod(B, 2)
        assert set(table.fiber_sizes().values()) == {2 ** (9 - r)}


def test_witness_pair_and_prefer_w(gf4_pc):
    table = count_table(gf4_pc, two_slot([[1, 0]], [[1, 1]]))
    w = table.witness()
    assert w.w == table.w_values[0]
    assert w.count_s > w.count_s_prime
    assert w.count_s == max(table.row(w.w)) and w.count_s_prime == min(table.row(w.w))
    pref = table.witness(prefer_w=(0, 1))
    assert pref.w == (0, 1)
    assert [e.value for e in pref.s] == [1] and [e.value for e in pref.s_prime] == [3]


def test_uniform_counts_match_mi_and_rank_test(rng):
    for fspec, n, k in CODES:
        f = field_build(*fspec)
        pc = gabidulin_parity_check(f, n, k)
        for sched in random_schedules(rng, 2, f.m, n - k, n, 15):
            v = check_uniform_counts(pc, sched)
            assert v.secure == (mutual_information(count_table(pc, sched)) == 0.0)
            if sched.active_full_rank():
                assert check_fiber_injectivity(pc, sched) == v.secure


def test_rank_test_preconditions(gf4_pc):
    with pytest.raises(PreconditionViolated):
        check_fiber_injectivity(gf4_pc, static([[1, 0], [0, 1]], 2))
    with pytest.raises(PreconditionViolated):
        check_fiber_injectivity(gf4_pc, static([[0, 0]], 2))


def test_more_taps_never_leak_less(rng):
    f = field_build(2, 3, [1, 1, 0, 1])
    pc = gabidulin_parity_check(f, 3, 1)
    for small in random_schedules(rng, 2, 3, 1, 3, 10):
        extra = rng.integers(0, 2, size=(3, 1, 3))
        big = TapSchedule(2, 3, 2, tuple(np.vstack([B, e]) for B, e in zip(small.blocks, extra)))
        assert mutual_information(count_table(pc, big)) >= mutual_information(count_table(pc, small)) - 1e-12


def test_partitioning_and_threads_do_not_change_counts(rng):
    f = field_build(2, 4, [1, 1, 0, 0, 1])
    pc = gabidulin_parity_check(f, 4, 2)
    sched = random_schedules(rng, 2, 4, 2, 4, 1)[0]
    base = count_table(pc, sched)
    for parts, workers in [(2, 1), (4, 4), (7, 3)]:
        assert count_table(pc, sched, parts=parts, workers=workers).digest() == base.digest()


def test_basis_change_relabels_slots(gf4_pc):
    f = gf4_pc.field
    T = basis_change_matrix(f, [f.one, f.alpha])  # coordinate order swapped
    for b1, b2 in itertools.product([[1, 0], [0, 1], [1, 1]], repeat=2):
        swapped = count_table(gf4_pc, two_slot([b1], [b2]), basis=T)
        plain = count_table(gf4_pc, two_slot([b2], [b1]))
        assert mutual_information(swapped) == mutual_information(plain)
        assert sorted(swapped.counts.ravel().tolist()) == sorted(plain.counts.ravel().tolist())


def test_universal_checks(gf4_pc):
    assert not universal_m_strong_secure(gf4_pc, 1).secure
    assert universal_m_strong_secure(gf4_pc, 1, duration=1).secure
    assert universal_m_strong_secure(gf4_pc, 0).secure
    assert analyzer.count_schedules(2, 2, 1, 2) == 9


def test_budget_and_dimension_errors(gf4_pc):
    with pytest.raises(BudgetExceeded):
        count_table(gf4_pc, static([[1, 0]], 2), budget=8)
    with pytest.raises(DimensionMismatch):
        count_table(gf4_pc, static([[1, 0]], 3))


def test_budget_env(monkeypatch, gf4_pc):
    monkeypatch.setenv(analyzer.BUDGET_ENV, "4")
    with pytest.raises(BudgetExceeded):
        count_table(gf4_pc, static([[1, 0]], 2))


def test_rank_deficient_slots_are_flagged(gf4_pc):
    v = check_uniform_counts(gf4_pc, two_slot([[0, 0]], [[1, 1]]))
    assert "rank-deficient-active-slot" in v.flags
    v = check_uniform_counts(gf4_pc, TapSchedule.from_blocks([None, np.array([[1, 1]])], 2))
    assert "inactive-slots" in v.flags and v.secure
