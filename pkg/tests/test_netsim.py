from __future__ import annotations

import itertools

import numpy as np
import pytest

from nctap import netsim
from nctap.errors import CycleDetected, DimensionMismatch, UnknownLink
from nctap.netsim import Link, Network


def test_butterfly_gcvs_and_xor():
    net = netsim.butterfly(2)
    table = netsim.propagate_gcvs(net)
    assert table.gcv("cd") == (1, 1)
    assert table.gcv("at1") == (1, 0) and table.gcv("bt2") == (0, 1)
    for X in itertools.product(range(2), repeat=2):
        vals = netsim.simulate(net, X)
        assert vals["cd"] == (X[0] + X[1]) % 2
        for lid, v in vals.items():
            assert v == table.link_value(lid, X)
    feas = netsim.check_feasible(net)
    assert all(f.feasible and f.rank == 2 and f.max_flow == 2 for f in feas.values())


def test_routing_only_butterfly_starves_a_sink():
    net = netsim.butterfly(2, coding=False)
    feas = netsim.check_feasible(net)
    assert feas["t1"].rank == 1 and not feas["t1"].feasible
    assert feas["t2"].feasible
    assert feas["t1"].max_flow == 2


def test_three_link_network_gcvs():
    table = netsim.propagate_gcvs(netsim.three_link_network(2))
    assert [table.gcv(e) for e in ("e1", "e2", "e3")] == [(1, 0), (0, 1), (1, 1)]


def test_simulate_matches_gcv_products_on_random_codes(rng):
    net = netsim.butterfly(5)
    for _ in range(20):
        coded = net.with_coefficients(netsim.random_coefficients(net, rng))
        table = netsim.propagate_gcvs(coded)
        X = rng.integers(0, 5, size=2)
        out = netsim.simulate(coded, X)
        for lid in out:
            assert out[lid] == int(np.dot(table.gcv(lid), X) % 5)


def test_max_flow_counts_edge_disjoint_paths():
    links = (Link("a", "s", "u"), Link("b", "s", "u"), Link("c", "u", "t"), Link("d", "s", "t"))
    net = Network(2, 2, "s", ("t",), links)
    assert netsim.max_flow(net, "t") == 2
    assert netsim.max_flow(netsim.butterfly(2), "t2") == 2


def test_random_codes_succeed_often_over_large_fields():
    net = netsim.butterfly(101)
    rng = np.random.default_rng(7)
    trials = 400
    ok = sum(all(f.feasible for f in netsim.check_feasible(net, table=netsim.random_network_code(net, rng)).values())
             for _ in range(trials))
    # two sinks, nine links with random coefficients
    assert ok / trials >= (1 - 2 / 101) ** 9 - 0.05


def test_time_varying_and_seed_determinism():
    net = netsim.butterfly(7)
    a = netsim.random_network_code(net, np.random.default_rng(3), m=3, time_varying=True)
    b = netsim.random_network_code(net, np.random.default_rng(3), m=3, time_varying=True)
    assert a.to_config() == b.to_config()
    assert len(a.slots) == 3 and a.slots[0] != a.slots[1]
    static = netsim.random_network_code(net, np.random.default_rng(3), m=3)
    assert static.slots[0] == static.slots[1] == static.slots[2]


def test_schedule_from_taps():
    table = netsim.static_table(netsim.propagate_gcvs(netsim.three_link_network(2)), 2)
    sched = netsim.schedule_from_taps(table, [["e2"], ["e3"]])
    assert sched.blocks[0].tolist() == [[0, 1]] and sched.blocks[1].tolist() == [[1, 1]]
    part = netsim.schedule_from_taps(table, [None, ["e1"]])
    assert part.inactive == frozenset({1})
    with pytest.raises(DimensionMismatch):
        netsim.schedule_from_taps(table, [["e1"], ["e1", "e2"]])


def test_network_errors():
    cyc = (Link("a", "s", "u"), Link("b", "u", "v"), Link("c", "v", "u"))
    with pytest.raises(CycleDetected):
        Network(2, 1, "s", ("v",), cyc).topological_links()
    with pytest.raises(UnknownLink):
        netsim.propagate_gcvs(netsim.butterfly(2)).gcv("zz")
    with pytest.raises(ValueError):
        Network(2, 2, "s", (), (Link("a", "s", "u"), Link("b", "u", "t")), {"b": {"b": 1}})
    with pytest.raises(DimensionMismatch):
        Network(2, 2, "s", (), (Link("a", "s", "u"),), {"a": (1,)})
