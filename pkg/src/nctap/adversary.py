"""Wiretappers that re-select their taps every time slot.

Codeword symbol ``x_j`` in GF(q^m) travels as its m coordinates, coordinate
``t`` in slot ``t``.  A schedule lists one ``mu x n`` matrix ``B_t`` over GF(q)
per slot; the tapper sees ``B_t`` applied to the slot-``t`` coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import DimensionMismatch
from .gf import FieldElement, FieldSpec, values


@dataclass(frozen=True)
class TapSchedule:
    """Per-slot wiretap matrices, slots numbered from 1 as in the model.

    ``inactive`` holds the 1-based indices of slots where nothing is tapped;
    their blocks are stored as zero matrices.
    """

    q: int
    n: int
    mu: int
    blocks: tuple[np.ndarray, ...]
    inactive: frozenset[int] = dc_field(default_factory=frozenset)

    def __post_init__(self):
        fixed = []
        for t, B in enumerate(self.blocks, start=1):
            B = np.asarray(B, dtype=np.int64).reshape(self.mu, self.n) % self.q
            if t in self.inactive:
                B = np.zeros((self.mu, self.n), dtype=np.int64)
            B.setflags(write=False)
            fixed.append(B)
        object.__setattr__(self, "blocks", tuple(fixed))
        object.__setattr__(self, "inactive", frozenset(self.inactive))
        bad = [t for t in self.inactive if not 1 <= t <= len(fixed)]
        if bad:
            raise DimensionMismatch(f"inactive slots {sorted(bad)} outside 1..{len(fixed)}")

    @classmethod
    def from_blocks(cls, blocks: Sequence, q: int, inactive: Iterable[int] = ()) -> TapSchedule:
        """Build from a list of matrices; ``None`` marks an inactive slot."""
        inactive = set(inactive)
        shape = next((np.shape(B) for B in blocks if B is not None), None)
        if shape is None:
            raise DimensionMismatch("cannot infer (mu, n) from an all-inactive list; use TapSchedule.zero")
        mu, n = shape
        full = []
        for t, B in enumerate(blocks, start=1):
            if B is None:
                inactive.add(t)
                B = np.zeros((mu, n), dtype=np.int64)
            if np.shape(B) != (mu, n):
                raise DimensionMismatch(f"slot {t} has shape {np.shape(B)}, expected {(mu, n)}")
            full.append(B)
        return cls(q, n, mu, tuple(full), frozenset(inactive))

    @classmethod
    def static(cls, B, m: int, q: int) -> TapSchedule:
        """The conventional fixed-tap wiretapper: the same B in every slot."""
        B = np.asarray(B, dtype=np.int64)
        return cls(q, B.shape[1], B.shape[0], tuple(B for _ in range(m)))

    @classmethod
    def zero(cls, m: int, mu: int, n: int, q: int) -> TapSchedule:
        z = np.zeros((mu, n), dtype=np.int64)
        return cls(q, n, mu, tuple(z for _ in range(m)), frozenset(range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def duration(self) -> int:
        """Number of active slots."""
        return self.m - len(self.inactive)

    def block_ranks(self) -> tuple[int, ...]:
        return tuple(linalg.rank_mod(B, self.q) if B.size else 0 for B in self.blocks)

    def rank(self) -> int:
        return sum(self.block_ranks())

    def active_full_rank(self) -> bool:
        """Every active slot has rank mu."""
        return all(r == self.mu for t, r in enumerate(self.block_ranks(), start=1) if t not in self.inactive)

    def to_config(self) -> dict:
        slots = []
        for t, B in enumerate(self.blocks, start=1):
            slots.append("inactive" if t in self.inactive else {"B": B.tolist()})
        return {"m": self.m, "mu": self.mu, "slots": slots}

    def __eq__(self, other):
        return (
            isinstance(other, TapSchedule)
            and (self.q, self.n, self.mu, self.inactive) == (other.q, other.n, other.mu, other.inactive)
            and len(self.blocks) == len(other.blocks)
            and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )

    def __hash__(self):
        return hash((self.q, self.n, self.mu, self.inactive, tuple(B.tobytes() for B in self.blocks)))


def _coords(field: FieldSpec, x: Sequence[int], basis: np.ndarray | None) -> np.ndarray:
    """n x m array: row j holds the coordinates of x_j."""
    C = field.coords_array(np.asarray(x, dtype=np.int64).reshape(-1))
    if basis is not None:
        C = C @ np.asarray(basis, dtype=np.int64).T % field.p
    return C


def flatten(x: Sequence[FieldElement | int], field: FieldSpec, basis: np.ndarray | None = None) -> np.ndarray:
    """Slot-major coordinate listing (x_1^(1), ..., x_n^(1), ..., x_1^(m), ..., x_n^(m)).

    ``basis`` is an optional coordinate-change matrix from
    :func:`nctap.gf.basis_change_matrix`.
    """
    return _coords(field, values(x), basis).T.reshape(-1)


def unflatten(v, field: FieldSpec, n: int, basis: np.ndarray | None = None) -> tuple[FieldElement, ...]:
    v = np.asarray(v, dtype=np.int64).reshape(field.m, n) % field.p
    C = v.T
    if basis is not None:
        C = C @ linalg.inverse_mod(basis, field.p).T % field.p
    return tuple(FieldElement(field, field.from_coords(row)) for row in C)


def block_diag(sched: TapSchedule) -> np.ndarray:
    """The (m mu) x (m n) block-diagonal matrix with blocks B_1, ..., B_m."""
    out = np.zeros((sched.m * sched.mu, sched.m * sched.n), dtype=np.int64)
    for t, B in enumerate(sched.blocks):
        out[t * sched.mu:(t + 1) * sched.mu, t * sched.n:(t + 1) * sched.n] = B
    return out


def _check(sched: TapSchedule, field: FieldSpec, x: Sequence[int]):
    if sched.q != field.p:
        raise DimensionMismatch(f"schedule over GF({sched.q}) used with GF({field.p}^{field.m})")
    if sched.m != field.m:
        raise DimensionMismatch(f"schedule has {sched.m} slots, field needs m={field.m}")
    if len(x) != sched.n:
        raise DimensionMismatch(f"codeword length {len(x)} != n={sched.n}")


def observe(sched: TapSchedule, x: Sequence[FieldElement | int], field: FieldSpec, basis: np.ndarray | None = None) -> np.ndarray:
    """W = B~ x-bar, ordered (w_11, ..., w_mu1, ..., w_1m, ..., w_mum)."""
    x = values(x)
    _check(sched, field, x)
    return block_diag(sched) @ flatten(x, field, basis) % field.p


def observe_slotwise(sched: TapSchedule, x: Sequence[FieldElement | int], field: FieldSpec) -> np.ndarray:
    """The same observation computed as w_it = t-th coordinate of (b_it . x).

    The inner product ``b_it . x`` is evaluated in GF(q^m) with the GCV
    entries acting as base-field scalars.  Only defined for the polynomial
    basis.
    """
    x = values(x)
    _check(sched, field, x)
    w = []
    for t, B in enumerate(sched.blocks, start=1):
        for row in B:
            acc = 0
            for b, xj in zip(row, x):
                acc = field.add(acc, field.scalar_mul(int(b), xj))
            w.append(field.coordinate(acc, t))
    return np.array(w, dtype=np.int64)
