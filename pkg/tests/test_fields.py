from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrank.errors import FieldError
from qrank.fields import (
    FieldSpec,
    axiom_sweep,
    field_arith,
    field_from_json,
    field_make,
    field_to_json,
    frobenius,
    frobenius_norm,
    norm_by_exponent,
    subfield_elements,
    tower_from_json,
    tower_make,
    tower_to_json,
)

SMALL = [(2, 1), (3, 1), (2, 3), (2, 4), (3, 2), (5, 2), (7, 1), (2, 6)]


def poly_mul_oracle(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    """Schoolbook product of digit vectors reduced by the modulus."""
    e = len(modulus) - 1
    da = [(a // p ** i) % p for i in range(e)]
    db = [(b // p ** i) % p for i in range(e)]
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            for i in range(e + 1):
                prod[d - e + i] = (prod[d - e + i] - c * modulus[i]) % p
    return sum(c * p ** i for i, c in enumerate(prod[:e]))


def add_oracle(a: int, b: int, p: int, e: int) -> int:
    return sum(((a // p ** i + b // p ** i) % p) * p ** i for i in range(e))


@pytest.mark.parametrize("p,e", [(2, 3), (3, 2), (2, 4), (5, 2)])
def test_multiplication_matches_polynomial_oracle(p, e):
    f = field_make(p, e)
    for a, b in itertools.product(range(f.order), repeat=2):
        assert f.mul(a, b) == poly_mul_oracle(a, b, p, f.modulus)
        assert f.add(a, b) == add_oracle(a, b, p, e)


@st.composite
def field_and_elements(draw, count=3):
    p, e = draw(st.sampled_from(SMALL))
    f = field_make(p, e)
    return f, [draw(st.integers(0, f.order - 1)) for _ in range(count)]


@given(field_and_elements())
def test_ring_laws(data):
    f, (a, b, c) = data
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(f.add(a, b), b) == a
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.div(f.mul(a, b), a) == b


@given(field_and_elements(2))
def test_frobenius_is_additive_and_multiplicative(data):
    f, (x, y) = data
    assert frobenius(f, f.add(x, y)) == f.add(frobenius(f, x), frobenius(f, y))
    assert frobenius(f, f.mul(x, y)) == f.mul(frobenius(f, x), frobenius(f, y))
    assert frobenius(f, x, f.e) == x


@given(field_and_elements(2))
def test_vectorised_ops_match_scalar_ops(data):
    f, (x, y) = data
    for dt in (np.int16, np.int32, np.int64):
        a = np.array([x, y, 0], dtype=dt)
        b = np.array([y, x, x], dtype=dt)
        assert f.mul_array(a, b).tolist() == [f.mul(x, y), f.mul(y, x), 0]
        assert f.add_array(a, b).tolist() == [f.add(x, y), f.add(y, x), x]


@pytest.mark.parametrize("p,e", SMALL)
def test_axiom_sweep_passes(p, e):
    assert axiom_sweep(field_make(p, e)) is None


class _BrokenField(FieldSpec):
    """Multiplication table with one asymmetric entry."""

    def mul_array(self, a, b):
        out = np.array(super().mul_array(a, b))
        if out.ndim == 2 and out.shape[0] > 3 and out.shape[1] > 2:
            out[3, 2] = self.add(int(out[3, 2]), 1)
        return out


def test_axiom_sweep_detects_a_broken_table():
    f = field_make(2, 3)
    broken = _BrokenField(f.p, f.e, f.modulus)
    assert axiom_sweep(broken) is not None


@pytest.mark.parametrize("p,e,d", [(2, 4, 1), (2, 4, 2), (3, 2, 1), (2, 6, 2), (2, 6, 3)])
def test_norm_forms_agree_and_land_in_subfield(p, e, d):
    f = field_make(p, e)
    sub = set(subfield_elements(f, p ** d))
    assert len(sub) == p ** d
    for x in range(f.order):
        n1 = frobenius_norm(f, x, p ** d)
        assert n1 == norm_by_exponent(f, x, p ** d)
        assert n1 in sub


def test_norm_is_multiplicative():
    f = field_make(2, 4)
    for x, y in itertools.product(range(1, 16), repeat=2):
        assert frobenius_norm(f, f.mul(x, y), 4) == f.mul(frobenius_norm(f, x, 4), frobenius_norm(f, y, 4))


@pytest.mark.parametrize("p,u,m", [(2, 1, 4), (2, 2, 2), (3, 1, 2), (2, 2, 3), (5, 1, 2)])
def test_tower_embedding_is_a_ring_map(p, u, m):
    t = tower_make(p, u, m)
    top, base, emb = t.top, t.base, t.embed
    assert len(set(emb)) == t.q
    for a, b in itertools.product(range(t.q), repeat=2):
        assert emb[base.mul(a, b)] == top.mul(emb[a], emb[b])
        assert emb[base.add(a, b)] == top.add(emb[a], emb[b])


@pytest.mark.parametrize("p,u,m", [(2, 1, 4), (2, 2, 2), (3, 1, 2)])
def test_pi_coordinates_roundtrip_and_linearity(p, u, m):
    t = tower_make(p, u, m)
    for x in range(t.Q):
        assert t.from_packed(t.to_packed(x)) == x
    for x, y in itertools.product(range(t.Q), repeat=2):
        cx, cy = t.pi_coords(x), t.pi_coords(y)
        assert t.pi_coords(t.top.add(x, y)) == [t.base.add(a, b) for a, b in zip(cx, cy)]


def test_pairing_is_bilinear():
    t = tower_make(2, 2, 2)
    c = [3, 7, 11]
    v, w = [1, 2, 3], [0, 3, 1]
    vw = [t.base.add(a, b) for a, b in zip(v, w)]
    assert t.pairing(c, vw) == t.top.add(t.pairing(c, v), t.pairing(c, w))


def test_field_errors():
    with pytest.raises(FieldError):
        field_make(4)
    with pytest.raises(FieldError):
        field_make(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    f = field_make(2, 3)
    with pytest.raises(FieldError):
        f.inv(0)
    with pytest.raises(FieldError):
        field_arith(f, "mul", 9, 1)
    with pytest.raises(FieldError):
        field_arith(f, "sqrt", 1)


def test_json_roundtrips():
    f = field_make(3, 2)
    assert field_from_json(field_to_json(f)) == f
    t = tower_make(2, 2, 2)
    assert tower_from_json(tower_to_json(t)) == t
