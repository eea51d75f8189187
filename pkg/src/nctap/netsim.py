"""Linear network coding on acyclic networks over GF(q).

The source injects ``n`` symbols per slot.  A link leaving the source carries
a combination of those symbols; any other link carries a combination of the
links entering its tail node.  Propagating these local coefficients in
topological order gives each link its global coding vector (GCV).
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field as dc_field
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .adversary import TapSchedule
from .errors import CycleDetected, DimensionMismatch, UnknownLink


@dataclass(frozen=True)
class Link:
    id: str
    tail: str
    head: str


@dataclass
class Network:
    """Directed acyclic network with a single source.

    ``coefficients`` maps a link id to its local coefficients: a length-``n``
    sequence for source out-links, or a mapping ``{in_link_id: c}`` for other
    links.  Missing entries are zero.
    """

    q: int
    n: int
    source: str
    sinks: tuple[str, ...]
    links: tuple[Link, ...]
    coefficients: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.links = tuple(self.links)
        self.sinks = tuple(self.sinks)
        ids = [ln.id for ln in self.links]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate link ids")
        self._by_id = {ln.id: ln for ln in self.links}
        for lid, coef in self.coefficients.items():
            link = self.link(lid)
            if link.tail == self.source:
                if len(coef) != self.n:
                    raise DimensionMismatch(f"source link {lid} needs {self.n} coefficients")
            else:
                for parent in coef:
                    if self.link(parent).head != link.tail:
                        raise ValueError(f"link {lid} references {parent}, which does not enter {link.tail}")

    @property
    def nodes(self) -> list[str]:
        seen = {self.source: None}
        for ln in self.links:
            seen.setdefault(ln.tail)
            seen.setdefault(ln.head)
        return list(seen)

    def link(self, lid: str) -> Link:
        try:
            return self._by_id[lid]
        except KeyError:
            raise UnknownLink(lid) from None

    def in_links(self, node: str) -> list[Link]:
        return [ln for ln in self.links if ln.head == node]

    def topological_links(self) -> list[Link]:
        graph: dict[str, set[str]] = {node: set() for node in self.nodes}
        for ln in self.links:
            graph[ln.head].add(ln.tail)
        try:
            order = list(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise CycleDetected(str(exc)) from None
        rank = {node: i for i, node in enumerate(order)}
        return sorted(self.links, key=lambda ln: (rank[ln.tail], self.links.index(ln)))

    def with_coefficients(self, coefficients: dict) -> Network:
        return Network(self.q, self.n, self.source, self.sinks, self.links, coefficients)


@dataclass(frozen=True)
class GcvTable:
    """GCVs per slot: ``slots[t][link_id]`` is the length-n vector used in slot t+1."""

    q: int
    n: int
    slots: tuple[Mapping[str, tuple[int, ...]], ...]

    def gcv(self, link_id: str, slot: int = 1) -> tuple[int, ...]:
        table = self.slots[slot - 1]
        if link_id not in table:
            raise UnknownLink(link_id)
        return table[link_id]

    def link_value(self, link_id: str, X: Sequence[int], slot: int = 1) -> int:
        """Y_e = b_e . X over GF(q)."""
        return int(np.dot(self.gcv(link_id, slot), np.asarray(X, dtype=np.int64)) % self.q)

    def receiver_matrix(self, links: Sequence[str], slot: int = 1) -> np.ndarray:
        return np.array([self.gcv(lid, slot) for lid in links], dtype=np.int64).reshape(len(links), self.n)

    def to_config(self) -> list[dict]:
        return [{lid: list(v) for lid, v in table.items()} for table in self.slots]


def propagate_gcvs(net: Network) -> GcvTable:
    """GCVs for one slot from the network's local coefficients."""
    q, n = net.q, net.n
    gcv: dict[str, tuple[int, ...]] = {}
    for ln in net.topological_links():
        coef = net.coefficients.get(ln.id)
        if ln.tail == net.source:
            vec = np.zeros(n, dtype=np.int64) if coef is None else np.asarray(coef, dtype=np.int64) % q
        else:
            vec = np.zeros(n, dtype=np.int64)
            for parent, c in (coef or {}).items():
                vec = (vec + int(c) * np.asarray(gcv[parent], dtype=np.int64)) % q
        gcv[ln.id] = tuple(int(v) for v in vec)
    ordered = {ln.id: gcv[ln.id] for ln in net.links}
    return GcvTable(q, n, (ordered,))


def simulate(net: Network, X: Sequence[int]) -> dict[str, int]:
    """Push one slot of source symbols through the local combinations directly."""
    q = net.q
    value: dict[str, int] = {}
    for ln in net.topological_links():
        coef = net.coefficients.get(ln.id)
        if ln.tail == net.source:
            value[ln.id] = int(np.dot(coef, X) % q) if coef is not None else 0
        else:
            value[ln.id] = sum(int(c) * value[p] for p, c in (coef or {}).items()) % q
    return {ln.id: value[ln.id] for ln in net.links}


def max_flow(net: Network, sink: str) -> int:
    """Unit-capacity max flow from the source by BFS augmenting paths."""
    cap: dict[tuple[str, str], int] = defaultdict(int)
    adj: dict[str, set[str]] = defaultdict(set)
    for ln in net.links:
        cap[(ln.tail, ln.head)] += 1
        adj[ln.tail].add(ln.head)
        adj[ln.head].add(ln.tail)
    flow = 0
    while True:
        parent = {net.source: None}
        queue = deque([net.source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in sorted(adj[u]):
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


@dataclass(frozen=True)
class Feasibility:
    sink: str
    rank: int
    max_flow: int
    feasible: bool


def check_feasible(net: Network, n: int | None = None, table: GcvTable | None = None, slot: int = 1) -> dict[str, Feasibility]:
    """Per sink: can it decode X, i.e. do its in-link GCVs have rank n?"""
    n = net.n if n is None else n
    table = propagate_gcvs(net) if table is None else table
    out = {}
    for sink in net.sinks:
        flow = max_flow(net, sink)
        if n == 0:
            out[sink] = Feasibility(sink, 0, flow, True)
            continue
        A = table.receiver_matrix([ln.id for ln in net.in_links(sink)], slot)
        r = linalg.rank_mod(A, net.q) if A.size else 0
        out[sink] = Feasibility(sink, r, flow, r == n and n <= flow)
    return out


def random_coefficients(net: Network, rng: np.random.Generator) -> dict:
    """Uniform local coefficients for every link, drawn in link order."""
    coef = {}
    for ln in net.links:
        if ln.tail == net.source:
            coef[ln.id] = tuple(int(c) for c in rng.integers(0, net.q, size=net.n))
        else:
            parents = [p.id for p in net.in_links(ln.tail)]
            draws = rng.integers(0, net.q, size=len(parents))
            coef[ln.id] = {p: int(c) for p, c in zip(parents, draws)}
    return coef


def random_network_code(net: Network, rng: np.random.Generator, m: int = 1, time_varying: bool = False) -> GcvTable:
    """Random linear network code over m slots; fresh coefficients per slot if time-varying."""
    if not time_varying:
        table = propagate_gcvs(net.with_coefficients(random_coefficients(net, rng)))
        return GcvTable(net.q, net.n, table.slots * m)
    slots = []
    for _ in range(m):
        slots.append(propagate_gcvs(net.with_coefficients(random_coefficients(net, rng))).slots[0])
    return GcvTable(net.q, net.n, tuple(slots))


def static_table(table: GcvTable, m: int) -> GcvTable:
    """Repeat a one-slot table over m slots."""
    if len(table.slots) != 1:
        raise DimensionMismatch("expected a single-slot table")
    return GcvTable(table.q, table.n, table.slots * m)


def schedule_from_taps(table: GcvTable, taps: Sequence[Sequence[str] | None]) -> TapSchedule:
    """Rows of B_t are the slot-t GCVs of the listed links, in order; ``None`` skips a slot."""
    if len(table.slots) not in (1, len(taps)):
        raise DimensionMismatch(f"table has {len(table.slots)} slots, taps list {len(taps)}")
    mu = next((len(t) for t in taps if t is not None), None)
    if mu is None:
        raise DimensionMismatch("every slot is inactive; use TapSchedule.zero")
    blocks, inactive = [], set()
    for t, links in enumerate(taps, start=1):
        if links is None:
            inactive.add(t)
            blocks.append(np.zeros((mu, table.n), dtype=np.int64))
            continue
        if len(links) != mu:
            raise DimensionMismatch(f"slot {t} taps {len(links)} links, expected {mu}")
        slot = t if len(table.slots) > 1 else 1
        blocks.append(table.receiver_matrix(list(links), slot))
    return TapSchedule(table.q, table.n, mu, tuple(blocks), frozenset(inactive))


# -- stock networks --

def butterfly(q: int = 2, coding: bool = True) -> Network:
    """The classic two-sink butterfly at rate 2.

    s -> a carries X1, s -> b carries X2; the bottleneck c -> d carries
    X1 + X2 when ``coding`` is set and plain X1 otherwise.
    """
    links = (
        Link("sa", "s", "a"), Link("sb", "s", "b"),
        Link("at1", "a", "t1"), Link("ac", "a", "c"),
        Link("bt2", "b", "t2"), Link("bc", "b", "c"),
        Link("cd", "c", "d"),
        Link("dt1", "d", "t1"), Link("dt2", "d", "t2"),
    )
    coef = {
        "sa": (1, 0), "sb": (0, 1),
        "at1": {"sa": 1}, "ac": {"sa": 1},
        "bt2": {"sb": 1}, "bc": {"sb": 1},
        "cd": {"ac": 1, "bc": 1 if coding else 0},
        "dt1": {"cd": 1}, "dt2": {"cd": 1},
    }
    return Network(q, 2, "s", ("t1", "t2"), links, coef)


def three_link_network(q: int = 2) -> Network:
    """Rate-2 network exposing the three distinct nonzero GCVs over GF(2).

    ``e1`` carries X1, ``e2`` carries X2 and ``e3`` carries X1 + X2.
    """
    links = (
        Link("e1", "s", "v"), Link("e2", "s", "v"),
        Link("e3", "v", "r"), Link("f1", "v", "r"),
    )
    coef = {"e1": (1, 0), "e2": (0, 1), "e3": {"e1": 1, "e2": 1}, "f1": {"e1": 1}}
    return Network(q, 2, "s", ("r",), links, coef)
