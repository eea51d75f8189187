"""Gaussian elimination over finite fields.

Two flavours live here.  The ``*_mod`` functions work on numpy integer
arrays over a prime field GF(p) and are what the enumeration code uses.
The ``ext_*`` functions take a :class:`~nctap.gf.FieldSpec` and plain
nested lists of element integers, for matrices over GF(p^m) such as a
parity-check matrix.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .gf import FieldSpec


def rref_mod(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over GF(p) and its pivot columns."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] * pow(int(R[r, c]), p - 2, p) % p
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = (R[others] - np.outer(R[others, c], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_mod(M, p)[1])


def nullspace_mod(M, p: int) -> np.ndarray:
    """Basis of {v : M v = 0} over GF(p), one vector per row."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref_mod(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = -R[r, f] % p
    return basis


def inverse_mod(M, p: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64) % p
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("matrix is not square")
    R, pivots = rref_mod(np.hstack([M, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


def matmul_mod(A, B, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def rref_matrices(p: int, rows: int, n: int) -> Iterator[np.ndarray]:
    """Every full-rank ``rows x n`` matrix over GF(p) in reduced row echelon form.

    These are canonical representatives of the ``rows``-dimensional subspaces
    of GF(p)^n.  Order: pivot tuples lexicographically, then free entries in
    odometer order, so smaller pivot columns come first.
    """
    if rows == 0:
        yield np.zeros((0, n), dtype=np.int64)
        return
    for pivots in itertools.combinations(range(n), rows):
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
        for fill in itertools.product(range(p), repeat=len(slots)):
            M = np.zeros((rows, n), dtype=np.int64)
            for r, pc in enumerate(pivots):
                M[r, pc] = 1
            for (r, c), v in zip(slots, fill):
                M[r, c] = v
            yield M


def count_subspaces(p: int, rows: int, n: int) -> int:
    """Gaussian binomial coefficient [n choose rows]_p."""
    if not 0 <= rows <= n:
        return 0
    num = den = 1
    for i in range(rows):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


# -- matrices over an extension field, entries as element integers --

def ext_rref(field: FieldSpec, M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    R = [list(map(int, row)) for row in M]
    if not R:
        return R, []
    rows, cols = len(R), len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        scale = field.inv(R[r][c])
        R[r] = [field.mul(scale, v) for v in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def ext_rank(field: FieldSpec, M: Sequence[Sequence[int]]) -> int:
    return len(ext_rref(field, M)[1])


def ext_matvec(field: FieldSpec, M: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, x):
            acc = field.add(acc, field.mul(a, b))
        out.append(acc)
    return out


def ext_nullspace(field: FieldSpec, M: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    if not M:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    R, pivots = ext_rref(field, M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(R[r][f])
        basis.append(v)
    return basis


def ext_solve(field: FieldSpec, M: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> list[int] | None:
    """One solution x of M x = b (free variables set to zero), or None."""
    if not M:
        return [0] * ncols
    aug = [list(row) + [int(bi)] for row, bi in zip(M, b)]
    R, pivots = ext_rref(field, aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][ncols]
    return x
