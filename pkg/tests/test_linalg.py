from __future__ import annotations

import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from nctap import linalg
from nctap.gf import field_build

from conftest import brute_rank

small = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 2), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60, deadline=None)
@given(small)
def test_rank_matches_span_count(rows):
    assert linalg.rank_mod(np.array(rows), 3) == brute_rank(rows, 3)


@settings(max_examples=60, deadline=None)
@given(small)
def test_nullspace_is_annihilated(rows):
    M = np.array(rows)
    N = linalg.nullspace_mod(M, 3)
    assert N.shape[0] == M.shape[1] - linalg.rank_mod(M, 3)
    if N.size:
        assert not (M @ N.T % 3).any()


def test_inverse():
    M = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 0]])
    inv = linalg.inverse_mod(M, 2)
    assert (linalg.matmul_mod(M, inv, 2) == np.eye(3, dtype=np.int64)).all()


def test_rref_matrices_enumerate_every_subspace_once():
    for p, r, n in [(2, 1, 2), (2, 2, 3), (3, 1, 2), (2, 2, 4), (3, 2, 3)]:
        mats = list(linalg.rref_matrices(p, r, n))
        assert len(mats) == linalg.count_subspaces(p, r, n)
        spans = set()
        for M in mats:
            assert linalg.rank_mod(M, p) == r
            span = frozenset(tuple(np.array(c) @ M % p) for c in itertools.product(range(p), repeat=r))
            spans.add(span)
        assert len(spans) == len(mats)


def test_gaussian_binomials():
    assert linalg.count_subspaces(2, 1, 2) == 3
    assert linalg.count_subspaces(2, 2, 4) == 35
    assert linalg.count_subspaces(3, 1, 3) == 13


def test_extension_field_rank_and_solve():
    f = field_build(2, 2, [1, 1, 1])
    a = f.power(1)
    assert linalg.ext_rank(f, [[1, a], [a, f.mul(a, a)]]) == 1
    assert linalg.ext_rank(f, [[1, a], [1, f.mul(a, a)]]) == 2
    M = [[1, a]]
    for b in range(4):
        x = linalg.ext_solve(f, M, [b], 2)
        assert linalg.ext_matvec(f, M, x) == [b]
    ns = linalg.ext_nullspace(f, M, 2)
    assert len(ns) == 1 and linalg.ext_matvec(f, M, ns[0]) == [0]
