from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from qrank.codes import classify_linearity, is_almost_affine, min_distance
from qrank.constructions import (
    LinearizedPolynomial,
    SemifieldTable,
    agtg_default_eta,
    agtg_make,
    agtg_norm,
    bundled_examples,
    find_witness_point,
    gabidulin_make,
    load_semifield,
    semifield_code_2dim,
    semifield_code_kdim,
    semifield_from_json,
    semifield_search,
    semifield_validate,
)
from qrank.errors import DataError, FieldError
from qrank.fields import field_make, tower_make


def field_as_semifield(p: int, m: int) -> SemifieldTable:
    f = field_make(p, m)
    mats = []
    for i in range(m):
        cols = [f.digits(f.mul(p ** i, p ** c)) for c in range(m)]
        mats.append(tuple(tuple(cols[c][r] for c in range(m)) for r in range(m)))
    return SemifieldTable(p, m, tuple(mats), 1)


@given(st.data())
def test_linearized_polynomials_are_linear(data):
    f = field_make(2, 4)
    coeffs = tuple(data.draw(st.integers(0, 15)) for _ in range(2))
    eta = data.draw(st.integers(0, 15))
    poly = LinearizedPolynomial(f, 2, coeffs, eta, 1, 2)
    x, y = data.draw(st.integers(0, 15)), data.draw(st.integers(0, 15))
    assert poly(f.add(x, y)) == f.add(poly(x), poly(y))


@pytest.mark.parametrize("q,n,k", [(2, 3, 1), (2, 3, 2), (2, 4, 2), (3, 3, 2)])
def test_gabidulin_codes_are_mrd(q, n, k):
    code = gabidulin_make(q, n, k)
    assert code.size == q ** (n * k)
    assert min_distance(code) == n - k + 1
    assert classify_linearity(code).qm_linear


def test_untwisted_agtg_is_gabidulin():
    a = agtg_make(2, 1, 3, 1, 2, 1, eta=0)
    assert min_distance(a) == 3
    assert a.size == 8


def test_twisted_code_shape():
    code = agtg_make(4, 1, 3, 1, 1, 1)
    assert code.size == 4 ** 3
    assert classify_linearity(code).p_linear
    eta = agtg_default_eta(4, 1, 3, 1, 1)
    assert agtg_norm(tower_make(2, 2, 3), 4, 1, eta) != 1


def test_no_admissible_twist_over_the_binary_field():
    # every nonzero element of F_8 has norm 1 down to F_2
    with pytest.raises(FieldError):
        agtg_default_eta(2, 1, 3, 1, 2)


def test_agtg_parameter_errors():
    with pytest.raises(DataError):
        agtg_make(2, 1, 4, 1, 2, 1)  # gcd(n, s) != 1
    with pytest.raises(DataError):
        agtg_make(2, 1, 3, 3, 1, 1)
    with pytest.raises(DataError):
        agtg_make(2, 1, 3, 1, 2, 1, eta=1)  # norm of 1 is 1


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (3, 2)])
def test_small_orders_have_no_proper_semifield(q, m):
    assert semifield_search(q, m) is None


def test_search_finds_a_proper_semifield_of_order_16():
    t = semifield_search(2, 4)
    cert = semifield_validate(t)
    assert cert.valid and cert.proper
    x, y, z = cert.witness
    assert t.mul(t.mul(x, y), z) != t.mul(x, t.mul(y, z))


@pytest.mark.parametrize("p,m", [(2, 4), (3, 2), (2, 3)])
def test_field_tables_are_not_proper(p, m):
    t = field_as_semifield(p, m)
    f = field_make(p, m)
    assert all(t.mul(x, y) == f.mul(x, y) for x in range(f.order) for y in range(f.order))
    cert = semifield_validate(t)
    assert cert.valid and not cert.proper
    with pytest.raises(DataError):
        semifield_code_2dim(t)


def test_shipped_semifield_roundtrip():
    t = load_semifield()
    assert semifield_from_json(t.to_json()) == t
    with pytest.raises(DataError):
        load_semifield("nope")


def test_semifield_code_sizes():
    t = load_semifield()
    c2 = semifield_code_2dim(t)
    assert (c2.n, c2.size) == (17, 16 ** 2)
    c3 = semifield_code_kdim(t, 3)
    assert (c3.n, c3.size) == (4, 16 ** 3)
    assert len(find_witness_point(t, 3)) == 2
    assert is_almost_affine(c3, "dims=1").almost_affine is True


def test_bundled_examples():
    assert bundled_examples("example_3_4").size == 256
    with pytest.raises(DataError):
        bundled_examples("missing")
