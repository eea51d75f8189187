"""Prime fields GF(p) and extension fields GF(p^m) built from a primitive polynomial.

Elements are stored as integers.  The integer ``v`` of an element encodes its
polynomial-basis coefficients in base ``p``::

    v = c_0 + c_1 p + ... + c_{m-1} p^{m-1},   element = sum_j c_j alpha^j

The coordinate vector used everywhere else in the package lists the
coefficients from the highest power down, ``(c_{m-1}, ..., c_1, c_0)``, so
coordinate ``i`` (1-based) is the coefficient of ``alpha^(m-i)``.  For GF(4)
this gives ``alpha^0 = (0, 1)``, ``alpha^1 = (1, 0)``, ``alpha^2 = (1, 1)``,
and the coordinate tuple read as a base-``p`` numeral is exactly ``v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, IndexOutOfRange, NotIrreducible, NotPrime, NotPrimitive

BASIS_ORDER = "descending-powers"

MAX_ORDER = 1 << 24


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# -- polynomials over GF(p), coefficient lists from the constant term upward --

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for j, c in enumerate(b):
            a[shift + j] = (a[shift + j] - factor * c) % p
        _poly_trim(a)
    return a


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


class FieldSpec:
    """The tower GF(p) inside GF(p^m), with alpha a root of ``poly``.

    Instances are immutable once built; use :func:`field_build` rather than
    calling the constructor directly.
    """

    __slots__ = ("p", "m", "poly", "order", "_exp", "_log")

    def __init__(self, p: int, m: int, poly: Sequence[int], exp: np.ndarray, log: np.ndarray):
        self.p = p
        self.m = m
        self.poly = tuple(poly)
        self.order = p**m
        self._exp = exp
        self._log = log  # assigned last: freezes the instance

    basis_order = BASIS_ORDER

    def __setattr__(self, name, value):
        if hasattr(self, "_log") and name in self.__slots__:
            raise AttributeError("FieldSpec is immutable")
        object.__setattr__(self, name, value)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m, self.poly) == (other.p, other.m, other.poly)

    def __hash__(self):
        return hash((self.p, self.m, self.poly))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m}, poly={list(self.poly)})"

    @property
    def q(self) -> int:
        """Size of the base field."""
        return self.p

    # -- raw integer arithmetic --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        out, place = 0, 1
        for _ in range(self.m):
            out += ((a % self.p + b % self.p) % self.p) * place
            a //= self.p
            b //= self.p
            place *= self.p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return -a % self.p
        out, place = 0, 1
        for _ in range(self.m):
            out += (-(a % self.p) % self.p) * place
            a //= self.p
            place *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        return int(self._exp[(self._log[a] + self._log[b]) % (self.order - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._exp[-self._log[a] % (self.order - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, i: int) -> int:
        """alpha^i as an integer."""
        return int(self._exp[i % (self.order - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("logarithm of zero")
        return int(self._log[a])

    def scalar_mul(self, c: int, a: int) -> int:
        """Multiply by a base-field scalar; acts coordinate-wise."""
        c %= self.p
        if c == 0:
            return 0
        if c == 1:
            return a
        out, place = 0, 1
        for _ in range(self.m):
            out += (a % self.p * c % self.p) * place
            a //= self.p
            place *= self.p
        return out

    def frobenius(self, a: int, times: int = 1) -> int:
        """a^(p^times)."""
        for _ in range(times):
            a = self.pow(a, self.p)
        return a

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        if self.m == 1:
            return pow(a, e % (self.p - 1), self.p)
        return int(self._exp[self._log[a] * e % (self.order - 1)])

    # -- coordinates --

    def coords(self, a: int) -> tuple[int, ...]:
        """Coordinate vector (x^(1), ..., x^(m))."""
        digits = []
        for _ in range(self.m):
            digits.append(a % self.p)
            a //= self.p
        return tuple(reversed(digits))

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.m:
            raise IndexOutOfRange(f"expected {self.m} coordinates, got {len(coords)}")
        v = 0
        for c in coords:
            v = v * self.p + int(c) % self.p
        return v

    def coordinate(self, a: int, i: int) -> int:
        if not 1 <= i <= self.m:
            raise IndexOutOfRange(f"coordinate index {i} outside 1..{self.m}")
        return a // self.p ** (self.m - i) % self.p

    def coords_array(self, values) -> np.ndarray:
        """Vectorised :meth:`coords`: shape ``values.shape + (m,)``."""
        values = np.asarray(values, dtype=np.int64)
        places = self.p ** np.arange(self.m - 1, -1, -1, dtype=np.int64)
        return (values[..., None] // places) % self.p

    # -- elements --

    def __call__(self, value: int) -> FieldElement:
        return self.element(value)

    def element(self, value: int) -> FieldElement:
        if not 0 <= value < self.order:
            raise IndexOutOfRange(f"element {value} outside 0..{self.order - 1}")
        return FieldElement(self, value)

    def elements(self) -> Iterator[FieldElement]:
        for v in range(self.order):
            yield FieldElement(self, v)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def alpha(self) -> FieldElement:
        return FieldElement(self, self.power(1))

    def format_power(self, a: int) -> str:
        """``0`` or ``α^i``."""
        return "0" if a == 0 else f"α^{self.log(a)}"

    def format_poly(self, a: int) -> str:
        if a == 0:
            return "0"
        terms = []
        for i, c in enumerate(self.coords(a)):
            if c == 0:
                continue
            e = self.m - 1 - i
            coef = "" if c == 1 and e > 0 else str(c)
            terms.append(f"{coef}α^{e}" if e > 0 else coef)
        return " + ".join(terms)

    def format_vector(self, a: int) -> str:
        return "(" + ",".join(str(c) for c in self.coords(a)) + ")"

    def element_table(self) -> list[tuple[str, str, str]]:
        """(power, polynomial, vector) rows: zero first, then alpha^0, alpha^1, ..."""
        rows = [("Zero", "0", self.format_vector(0))]
        for i in range(self.order - 1):
            a = self.power(i)
            rows.append((f"α^{i}", self.format_poly(a), self.format_vector(a)))
        return rows

    def to_config(self) -> dict:
        return {"p": self.p, "m": self.m, "poly": list(self.poly)}


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("operands belong to different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.scalar_mul(int(other), 1)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(self.field, self.field.pow(self.field.inv(self.value), -e))
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coords(self.value)

    def __str__(self):
        return self.field.format_power(self.value)

    def __repr__(self):
        return f"FieldElement({self.field.format_power(self.value)}={self.field.format_vector(self.value)})"


def field_build(p: int, m: int, poly: Sequence[int]) -> FieldSpec:
    """Build GF(p^m) from a monic primitive polynomial given constant term first.

    Raises :class:`NotPrime`, :class:`NotIrreducible` or :class:`NotPrimitive`.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be at least 1")
    poly = [int(c) % p for c in poly]
    if len(poly) != m + 1 or poly[-1] != 1:
        raise ValueError(f"poly must be monic of degree {m} (coefficients from the constant term upward)")
    if p**m > MAX_ORDER:
        raise ValueError(f"fields beyond {MAX_ORDER} elements are not supported")
    if not _is_irreducible(poly, p):
        raise NotIrreducible(f"{poly} is reducible over GF({p})")

    order = p**m
    exp = np.zeros(order - 1, dtype=np.int64)
    log = np.full(order, -1, dtype=np.int64)
    top_place = p ** (m - 1)
    low = poly[:-1]
    v = 1
    for i in range(order - 1):
        if log[v] != -1:
            raise NotPrimitive(f"alpha has multiplicative order {i} < {order - 1}")
        exp[i] = v
        log[v] = i
        # v <- v * alpha mod poly
        top = v // top_place
        v = (v % top_place) * p
        if top:
            place = 1
            acc = 0
            for j in range(m):
                digit = (v // place % p - top * low[j]) % p
                acc += digit * place
                place *= p
            v = acc
    if v != 1:
        raise NotPrimitive("alpha does not return to 1 after p^m - 1 steps")
    return FieldSpec(p, m, poly, exp, log)


def find_primitive_poly(p: int, m: int) -> list[int]:
    """First primitive polynomial in lexicographic order of its low coefficients."""
    for tail in itertools.product(range(p), repeat=m):
        poly = list(reversed(tail)) + [1]
        if poly[0] == 0:
            continue
        try:
            field_build(p, m, poly)
        except (NotIrreducible, NotPrimitive):
            continue
        return poly
    raise NotPrimitive(f"no primitive polynomial of degree {m} over GF({p})")


def default_field(p: int, m: int) -> FieldSpec:
    return field_build(p, m, find_primitive_poly(p, m))


def prime_field(p: int) -> FieldSpec:
    """GF(p) as a degree-1 tower; alpha is the smallest primitive root."""
    return default_field(p, 1)


# -- element-level operations --

def _same_field(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.field != b.field:
        raise ValueError("operands belong to different fields")
    return a.field


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(_same_field(a, b), a.field.add(a.value, b.value))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(_same_field(a, b), a.field.mul(a.value, b.value))


def neg(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field.neg(a.value))


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field.inv(a.value))


def scalar_mul(c: int, a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field.scalar_mul(c, a.value))


def coordinate(a: FieldElement, i: int) -> int:
    return a.field.coordinate(a.value, i)


def from_coords(field: FieldSpec, coords: Sequence[int]) -> FieldElement:
    return FieldElement(field, field.from_coords(coords))


def values(xs: Iterable) -> tuple[int, ...]:
    """Integer values of a sequence of elements or ints."""
    return tuple(x.value if isinstance(x, FieldElement) else int(x) for x in xs)


def basis_change_matrix(field: FieldSpec, basis: Sequence[FieldElement | int]) -> np.ndarray:
    """Matrix T over GF(p) taking polynomial-basis coordinates to ``basis`` coordinates.

    ``basis`` lists the new basis elements b_1..b_m; an element with new
    coordinates (y_1, ..., y_m) equals sum_i y_i b_i.  Then
    ``new = T @ coords(a) mod p``.
    """
    from .linalg import inverse_mod

    vals = values(basis)
    if len(vals) != field.m:
        raise IndexOutOfRange(f"a basis of GF({field.order}) needs {field.m} elements")
    cols = np.array([field.coords(v) for v in vals], dtype=np.int64).T
    return inverse_mod(cols, field.p)
