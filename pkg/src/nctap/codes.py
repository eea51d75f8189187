"""Parity-check matrices over GF(q^m), Gabidulin construction and coset coding."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import BudgetExceeded, DegreeTooSmall, DimensionMismatch, ParameterOutOfRange, RankDeficientH
from .gf import FieldElement, FieldSpec, values

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class ParityCheck:
    """A ``k x n`` matrix H over GF(q^m); the secret is the syndrome Hx.

    Entries are element integers (see :mod:`nctap.gf`).  ``k = 0`` is allowed
    and means the code is the whole space.
    """

    field: FieldSpec
    H: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        for row in self.H:
            if len(row) != self.n:
                raise DimensionMismatch(f"row of length {len(row)} in a parity check with n={self.n}")
            for v in row:
                if not 0 <= v < self.field.order:
                    raise ValueError(f"entry {v} is not an element of GF({self.field.order})")

    @property
    def k(self) -> int:
        return len(self.H)

    @property
    def mu(self) -> int:
        """Dimension n - k of the code."""
        return self.n - self.k

    @property
    def rank(self) -> int:
        return linalg.ext_rank(self.field, self.H)

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, self.H[i][j])

    def to_config(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "H": [[list(self.field.coords(v)) for v in row] for row in self.H],
        }


def parity_check(field: FieldSpec, rows: Sequence[Sequence[FieldElement | int]], n: int | None = None) -> ParityCheck:
    H = tuple(values(row) for row in rows)
    if n is None:
        if not H:
            raise ValueError("n is required when H has no rows")
        n = len(H[0])
    return ParityCheck(field, H, n)


def moore_matrix(field: FieldSpec, g: Sequence[FieldElement | int], k: int) -> ParityCheck:
    """Rows g_j^(q^i) for i = 0..k-1; no independence requirement on g."""
    g = values(g)
    rows = [tuple(field.frobenius(v, i) for v in g) for i in range(k)]
    return ParityCheck(field, tuple(rows), len(g))


def gabidulin_parity_check(field: FieldSpec, n: int, k: int, g: Sequence[FieldElement | int] | None = None) -> ParityCheck:
    """Moore-matrix parity check of an [n, n-k] Gabidulin code.

    ``g`` defaults to ``(1, alpha, ..., alpha^(n-1))`` and must be linearly
    independent over GF(q).
    """
    if field.m < n:
        raise DegreeTooSmall(f"Gabidulin codes need m >= n (m={field.m}, n={n})")
    if not 1 <= k <= n:
        raise ParameterOutOfRange(f"need 1 <= k <= n, got k={k}, n={n}")
    g = values(g) if g is not None else tuple(field.power(j) for j in range(n))
    if len(g) != n:
        raise DimensionMismatch(f"expected {n} generator elements, got {len(g)}")
    coord_matrix = np.array([field.coords(v) for v in g], dtype=np.int64)
    if linalg.rank_mod(coord_matrix, field.p) != n:
        raise ParameterOutOfRange("generator elements are not linearly independent over GF(q)")
    return moore_matrix(field, g, k)


def rank_weight(x: Sequence[FieldElement | int], field: FieldSpec) -> int:
    """Rank over GF(q) of the m x n matrix whose columns are the coordinates of x."""
    x = values(x)
    if not x:
        return 0
    cols = np.array([field.coords(v) for v in x], dtype=np.int64).T
    return linalg.rank_mod(cols, field.p)


def syndrome_decode(x: Sequence[FieldElement | int], pc: ParityCheck) -> tuple[FieldElement, ...]:
    x = values(x)
    if len(x) != pc.n:
        raise DimensionMismatch(f"codeword length {len(x)} != n={pc.n}")
    return tuple(FieldElement(pc.field, v) for v in linalg.ext_matvec(pc.field, pc.H, x))


def iter_space(field: FieldSpec, n: int) -> itertools.product:
    """All of GF(q^m)^n as tuples of element integers, lexicographic."""
    return itertools.product(range(field.order), repeat=n)


def verify_mrd(pc: ParityCheck, budget: int = DEFAULT_BUDGET) -> bool:
    """Brute force: is the minimum rank weight of ker H equal to k + 1?

    Every word of GF(q^m)^n is enumerated and kept when its syndrome is zero.
    """
    field = pc.field
    total = field.order**pc.n
    if total > budget:
        raise BudgetExceeded(f"{total} words exceed the budget of {budget}")
    best = None
    for x in iter_space(field, pc.n):
        if not any(x):
            continue
        if any(linalg.ext_matvec(field, pc.H, x)):
            continue
        w = rank_weight(x, field)
        if best is None or w < best:
            best = w
    if best is None:
        # ker H = {0}: no nonzero codeword can violate the bound
        return True
    return best == pc.k + 1


# -- coset coding --

@dataclass(frozen=True)
class CosetCoder:
    """Particular solutions plus a kernel basis for ``Hx = s``.

    A coset member is ``x0(s) + sum_j c_j v_j`` with ``c`` in GF(q^m)^(n-k).
    Randomness enters only through ``c``; drawing each c_j uniformly from
    ``0..q^m - 1`` (integers are element codes) gives a uniform member.
    """

    pc: ParityCheck
    kernel: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, pc: ParityCheck) -> CosetCoder:
        if pc.rank != pc.k:
            raise RankDeficientH(f"H has rank {pc.rank} < k={pc.k}")
        kernel = linalg.ext_nullspace(pc.field, pc.H, pc.n)
        return cls(pc, tuple(tuple(v) for v in kernel))

    @property
    def coset_size(self) -> int:
        return self.pc.field.order ** len(self.kernel)

    def particular(self, s: Sequence[FieldElement | int]) -> list[int]:
        s = values(s)
        if len(s) != self.pc.k:
            raise DimensionMismatch(f"secret length {len(s)} != k={self.pc.k}")
        x0 = linalg.ext_solve(self.pc.field, self.pc.H, s, self.pc.n)
        assert x0 is not None  # full row rank
        return x0

    def member(self, s: Sequence[FieldElement | int], choice: Sequence[int]) -> tuple[FieldElement, ...]:
        field = self.pc.field
        if len(choice) != len(self.kernel):
            raise DimensionMismatch(f"need {len(self.kernel)} coset coefficients")
        x = self.particular(s)
        for c, v in zip(choice, self.kernel):
            x = [field.add(a, field.mul(int(c), b)) for a, b in zip(x, v)]
        return tuple(FieldElement(field, a) for a in x)

    def members(self, s: Sequence[FieldElement | int]):
        for choice in itertools.product(range(self.pc.field.order), repeat=len(self.kernel)):
            yield self.member(s, choice)

    def encode(self, s: Sequence[FieldElement | int], rng: np.random.Generator) -> tuple[FieldElement, ...]:
        # one draw of n-k integers from rng.integers; documented so tests can replay it
        choice = rng.integers(0, self.pc.field.order, size=len(self.kernel))
        return self.member(s, [int(c) for c in choice])


def coset_encode(s: Sequence[FieldElement | int], pc: ParityCheck, rng: np.random.Generator) -> tuple[FieldElement, ...]:
    """Uniformly random x with Hx = s."""
    return CosetCoder.build(pc).encode(s, rng)
