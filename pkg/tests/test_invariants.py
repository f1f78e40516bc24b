from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qrank.codes import induced_qmatroid, shorten
from qrank.invariants import (
    dual_circuits,
    full_space_distribution,
    generalized_weights,
    macwilliams,
    macwilliams_forward,
    macwilliams_solve,
    minimal_supports,
    qbinomial_forward,
    qbinomial_inverse,
    subcode_support_weights,
    weight_distribution_bruteforce,
    weight_distribution_formula,
)
from qrank.qmatroids import uniform_make
from qrank.subspaces import enumerate_subspaces
from qrank.verification import explicit_dual


def _codes(ex34, port_code, gab):
    return [ex34, port_code, gab]


def test_formula_matches_bruteforce(ex34, port_code, gab):
    for code in _codes(ex34, port_code, gab):
        m = induced_qmatroid(code)
        assert weight_distribution_formula(m, code.m).A == weight_distribution_bruteforce(code).A


def test_formula_on_shortened_codes(ex34):
    words = list(ex34.codewords())
    for z in enumerate_subspaces(2, 3, 1):
        short = shorten(ex34, z, words[9])
        m = induced_qmatroid(short)
        assert weight_distribution_formula(m, short.m).A == weight_distribution_bruteforce(short).A


def test_bruteforce_is_anchor_independent(ex34):
    words = list(ex34.codewords())
    base = weight_distribution_bruteforce(ex34, words[0]).A
    assert base == (1, 15, 60, 180)
    for x in words[1:20]:
        assert weight_distribution_bruteforce(ex34, x).A == base


@pytest.mark.parametrize("n,q,mdeg", [(3, 2, 4), (2, 3, 2), (4, 2, 2)])
def test_full_space(n, q, mdeg):
    expected = full_space_distribution(n, q, mdeg)
    assert sum(expected) == q ** (n * mdeg)
    assert weight_distribution_formula(uniform_make(n, n, q), mdeg).A == expected


@given(st.sampled_from([(3, 2), (4, 2), (3, 3), (2, 5)]), st.data())
def test_qbinomial_inversion_roundtrip(nq, data):
    n, q = nq
    A = data.draw(st.lists(st.integers(-1000, 1000), min_size=n + 1, max_size=n + 1))
    assert qbinomial_inverse(qbinomial_forward(A, n, q), n, q) == A


@given(st.sampled_from([(3, 2, 1, 4), (4, 2, 2, 4), (3, 3, 2, 2)]), st.data())
def test_macwilliams_roundtrip(params, data):
    n, q, k, mdeg = params
    A = data.draw(st.lists(st.integers(-50, 50), min_size=n + 1, max_size=n + 1))
    B = macwilliams_solve(A, k, mdeg, n, q).B
    assert macwilliams_forward(B, k, mdeg, n, q) == tuple(Fraction(a) for a in A)


def test_macwilliams_matches_explicit_dual(gab, port_code):
    for code in (gab, port_code):
        m = induced_qmatroid(code)
        A = weight_distribution_bruteforce(code)
        dual_code = explicit_dual(code)
        observed = weight_distribution_bruteforce(dual_code).A
        solved = macwilliams(A, m.full_rank, code.m, code.n, code.q)
        via_dual = macwilliams(A, m.full_rank, code.m, code.n, code.q, path="dual_formula", m=m)
        assert solved.integral
        assert tuple(int(b) for b in solved.B) == observed
        assert via_dual.B == solved.B


def test_macwilliams_paths_agree_for_nonlinear_code(ex34):
    m = induced_qmatroid(ex34)
    A = weight_distribution_bruteforce(ex34)
    solved = macwilliams(A, 2, ex34.m, 3, 2)
    via_dual = macwilliams(A, 2, ex34.m, 3, 2, path="dual_formula", m=m)
    assert solved.B == via_dual.B
    assert solved.B[0] == 1


def test_uniform_with_small_extension_has_negative_coefficient():
    # U_{4,2} would be realised by an MRD code only when m >= 4
    assert not weight_distribution_formula(uniform_make(4, 2, 2), 3).nonneg
    assert weight_distribution_formula(uniform_make(4, 2, 2), 4).nonneg


def test_generalized_weights(gab, ex34):
    mg = induced_qmatroid(gab)
    assert generalized_weights(mg, code=gab) == (3, 4)
    assert subcode_support_weights(gab) == (3, 4)
    me = induced_qmatroid(ex34)
    gw = generalized_weights(me, code=ex34)
    assert gw == subcode_support_weights(ex34)
    assert list(gw) == sorted(gw)


def test_minimal_supports_are_dual_circuits(ex34, port_code):
    for code in (ex34, port_code):
        m = induced_qmatroid(code)
        assert set(minimal_supports(code)) == set(dual_circuits(m))
