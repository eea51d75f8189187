from __future__ import annotations

import itertools

import numpy as np
import pytest

from nctap.gf import field_build


def poly_mulmod(a, b, poly, p):
    """Schoolbook product of coefficient lists (constant first) reduced mod a monic poly."""
    m = len(poly) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for i in range(m + 1):
                prod[d - m + i] = (prod[d - m + i] - c * poly[i]) % p
    return (prod + [0] * m)[:m]


def to_poly(v, p, m):
    return [(v // p**j) % p for j in range(m)]


def from_poly(c, p):
    return sum(x * p**j for j, x in enumerate(c))


def brute_rank(rows, p):
    """Rank over GF(p) by counting the span (tiny matrices only)."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return 0
    span = set()
    for coef in itertools.product(range(p), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coef, rows)) % p for j in range(len(rows[0]))))
    size, r = len(span), 0
    while p**r < size:
        r += 1
    return r


@pytest.fixture(scope="session")
def gf4():
    return field_build(2, 2, [1, 1, 1])


@pytest.fixture(scope="session")
def gf8():
    return field_build(2, 3, [1, 1, 0, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria register a verdict here; printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
