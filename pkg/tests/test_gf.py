from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nctap import gf
from nctap.errors import DivisionByZero, IndexOutOfRange, NotIrreducible, NotPrime, NotPrimitive
from nctap.gf import FieldElement, field_build, find_primitive_poly

from conftest import from_poly, poly_mulmod, to_poly

FIELDS = [(2, 2, [1, 1, 1]), (2, 3, [1, 1, 0, 1]), (3, 2, [2, 1, 1]), (2, 4, [1, 1, 0, 0, 1]), (5, 1, [3, 1])]


@pytest.fixture(params=FIELDS, ids=lambda f: f"GF({f[0]}^{f[1]})")
def field(request):
    return field_build(*request.param)


def test_mul_matches_schoolbook(field):
    p, m = field.p, field.m
    for a, b in itertools.product(range(field.order), repeat=2):
        want = from_poly(poly_mulmod(to_poly(a, p, m), to_poly(b, p, m), list(field.poly), p), p)
        assert field.mul(a, b) == want


def test_add_is_coordinatewise(field):
    for a, b in itertools.product(range(field.order), repeat=2):
        want = tuple((x + y) % field.p for x, y in zip(field.coords(a), field.coords(b)))
        assert field.coords(field.add(a, b)) == want


def test_field_axioms(field):
    els = range(field.order)
    for a in els:
        assert field.add(a, field.neg(a)) == 0
        assert field.mul(a, 1) == a
        if a:
            assert field.mul(a, field.inv(a)) == 1
    for a, b, c in itertools.product(els, repeat=3):
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))


def test_alpha_generates_the_multiplicative_group(field):
    powers = {field.power(i) for i in range(field.order - 1)}
    assert powers == set(range(1, field.order))
    for a in range(1, field.order):
        assert field.power(field.log(a)) == a


def test_gf9_alpha_has_order_8():
    f = field_build(3, 2, [2, 1, 1])
    a = f.power(1)
    orders = [e for e in range(1, 9) if f.pow(a, e) == 1]
    assert orders[0] == 8


def test_element_table_layout(gf4):
    assert gf4.element_table() == [
        ("Zero", "0", "(0,0)"),
        ("α^0", "1", "(0,1)"),
        ("α^1", "α^1", "(1,0)"),
        ("α^2", "α^1 + 1", "(1,1)"),
    ]


def test_alpha_squared_is_alpha_plus_one(gf4):
    a = gf4.alpha
    assert a * a == a + gf4.one


def test_coordinates_are_one_based_from_the_top(gf4):
    a = gf4.power(1)
    assert gf4.coordinate(a, 1) == 1 and gf4.coordinate(a, 2) == 0
    assert gf4.coords(gf4.one.value) == (0, 1)
    with pytest.raises(IndexOutOfRange):
        gf4.coordinate(a, 3)
    with pytest.raises(IndexOutOfRange):
        gf4.coordinate(a, 0)


def test_coords_array_matches_scalar(field):
    vals = np.arange(field.order)
    arr = field.coords_array(vals)
    assert arr.shape == (field.order, field.m)
    for v in vals:
        assert tuple(arr[v]) == field.coords(int(v))


def test_coordinates_are_linear_over_the_base_field(field):
    for a, b in itertools.product(range(field.order), repeat=2):
        for c in range(field.p):
            mixed = field.add(field.scalar_mul(c, a), b)
            want = tuple((c * x + y) % field.p for x, y in zip(field.coords(a), field.coords(b)))
            assert field.coords(mixed) == want


def test_frobenius_is_additive_and_fixes_base_field(field):
    for a, b in itertools.product(range(field.order), repeat=2):
        assert field.frobenius(field.add(a, b)) == field.add(field.frobenius(a), field.frobenius(b))
    for c in range(field.p):
        assert field.frobenius(c) == c
    for a in range(field.order):
        assert field.frobenius(a, field.m) == a


@given(st.integers(0, 15), st.integers(0, 15))
def test_from_coords_roundtrip_gf16(a, b):
    f = field_build(2, 4, [1, 1, 0, 0, 1])
    assert f.from_coords(f.coords(a)) == a
    assert f.div(f.mul(a, b), b) == a if b else True


def test_errors():
    with pytest.raises(NotPrime):
        field_build(4, 2, [1, 1, 1])
    with pytest.raises(NotIrreducible):
        field_build(2, 2, [1, 0, 1])
    with pytest.raises(NotPrimitive):
        field_build(2, 4, [1, 1, 1, 1, 1])
    f = field_build(2, 2, [1, 1, 1])
    with pytest.raises(DivisionByZero):
        f.inv(0)
    with pytest.raises(ZeroDivisionError):
        f.one / f.zero


def test_find_primitive_poly():
    assert find_primitive_poly(2, 3) == [1, 1, 0, 1]
    assert find_primitive_poly(2, 4) == [1, 1, 0, 0, 1]
    for p, m in [(2, 2), (2, 5), (3, 2), (3, 3), (5, 2)]:
        f = field_build(p, m, find_primitive_poly(p, m))
        assert f.order == p**m


def test_element_wrappers(gf4):
    a = gf4.alpha
    assert isinstance(a, FieldElement)
    assert (a**3) == gf4.one
    assert a.inverse() * a == gf4.one
    assert gf.add(a, gf4.one).coeffs == (1, 1)
    assert gf.scalar_mul(0, a) == gf4.zero
    assert gf.coordinate(a, 1) == 1
    assert gf.from_coords(gf4, [1, 1]) == a + gf4.one
    assert str(a) == "α^1"


def test_basis_change_matrix(gf4):
    # new basis (alpha, 1): coordinates of x in it are (c_alpha, c_1), which is the standard order
    T = gf.basis_change_matrix(gf4, [gf4.alpha, gf4.one])
    assert (T == np.eye(2, dtype=np.int64)).all()
    T = gf.basis_change_matrix(gf4, [gf4.one, gf4.alpha])
    for v in range(4):
        new = T @ np.array(gf4.coords(v)) % 2
        assert gf4.from_coords([new[1], new[0]]) == v
