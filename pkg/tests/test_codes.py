from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrank.codes import (
    additive_code,
    as_explicit,
    batch_rank_weights,
    classify_linearity,
    code_from_json,
    code_rank,
    code_support,
    code_to_json,
    equivalence_transport_matrix,
    apply_equivalence,
    explicit_code,
    induced_qmatroid,
    is_almost_affine,
    min_distance,
    parse_scope,
    projection_image_size,
    puncture,
    rank_weight,
    shorten,
    subcode,
    support,
)
from qrank.errors import DataError, NotAlmostAffine
from qrank.fields import tower_make
from qrank.qmatroids import equivalence_check_tables, verify_axioms
from qrank.subspaces import enumerate_subspaces, random_subspace, span
from qrank.verification import kernel_support_expansion, random_invertible

TOWERS = [(2, 1, 4), (3, 1, 2), (2, 2, 2), (2, 1, 3)]


def span_size_oracle(tower, v) -> int:
    """|F_q-span of the entries of v| by closing the set under F_q-combinations."""
    top, emb = tower.top, tower.embed
    seen = {0}
    for x in v:
        seen = {top.add(s, top.mul(emb[a], x)) for s in seen for a in range(tower.q)}
    return len(seen)


@st.composite
def tower_and_word(draw, n_max=4):
    p, u, m = draw(st.sampled_from(TOWERS))
    t = tower_make(p, u, m)
    n = draw(st.integers(1, n_max))
    return t, tuple(draw(st.integers(0, t.Q - 1)) for _ in range(n))


@given(tower_and_word())
def test_rank_weight_matches_span_size(data):
    t, v = data
    w = rank_weight(t, v)
    assert t.q ** w == span_size_oracle(t, v)
    assert support(t, v).dim == w
    arr = np.array([v], dtype=np.int64)
    assert int(batch_rank_weights(t, arr)[0]) == w


@given(tower_and_word())
def test_rank_weight_is_independent_of_the_coordinate_basis(data):
    t, v = data
    alt = tower_make(t.p, t.u, t.m, pi_basis=tuple(reversed(t.pi_basis)))
    assert support(alt, v) == support(t, v)


def test_projection_sizes_independent_of_coordinate_basis(ex34):
    t = ex34.tower
    alt_tower = tower_make(t.p, t.u, t.m, pi_basis=(1, 3, 5, 15))
    alt = additive_code(alt_tower, ex34.generators)
    for v in enumerate_subspaces(2, 3):
        assert projection_image_size(alt, v) == projection_image_size(ex34, v)


@given(tower_and_word(3), st.integers(0, 10 ** 6))
def test_kernel_support_and_expansion_agree(data, seed):
    t, v = data
    rng = random.Random(seed)
    sub = random_subspace(t.base, len(v), rng.randrange(len(v) + 1), rng)
    kernel, contained, expands = kernel_support_expansion(t, len(v), v, sub)
    assert kernel == contained == expands


def test_additive_and_explicit_projection_sizes_agree(ex34, port_code):
    for code in (ex34, port_code):
        expl = as_explicit(code)
        assert expl.size == code.size
        for v in enumerate_subspaces(code.tower.base, code.n):
            assert projection_image_size(expl, v) == projection_image_size(code, v)


def test_example_code_is_almost_affine_but_not_linear(ex34):
    verdict = is_almost_affine(ex34)
    assert verdict.almost_affine is True and verdict.exhaustive
    assert ex34.k == 2
    lin = classify_linearity(ex34)
    assert lin.p_linear and not lin.qm_linear
    assert verify_axioms(induced_qmatroid(ex34)).ok


def test_fibre_sizes(ex34):
    # every fibre of pi_Z restricted to C has |C| / |pi_Z(C)| elements
    words = list(ex34.codewords())
    for z in enumerate_subspaces(2, 3):
        size = projection_image_size(ex34, z)
        x = words[len(words) // 3]
        assert subcode(ex34, z, x).size * size == ex34.size
        assert subcode(as_explicit(ex34), z, x).size * size == ex34.size


def test_shortened_codes_remain_almost_affine(ex34):
    words = list(ex34.codewords())
    for z in enumerate_subspaces(2, 3):
        for x in (words[0], words[-1]):
            short = shorten(ex34, z, x)
            assert short.n == 3 - z.dim
            assert is_almost_affine(short).almost_affine is True


def test_puncture_matches_projection(ex34):
    for z in enumerate_subspaces(2, 3):
        assert puncture(ex34, z).size == projection_image_size(ex34, z)


def test_support_is_independent_of_the_anchor(ex34):
    words = list(ex34.codewords())
    base = code_support(ex34, words[0])
    for x in words[1:40]:
        assert code_support(ex34, x) == base
        assert code_support(as_explicit(ex34), x) == base


def test_non_almost_affine_code_is_detected():
    t = tower_make(2, 1, 2)
    code = explicit_code(t, [(0, 0), (1, 0), (0, 1)])
    verdict = is_almost_affine(code)
    assert verdict.almost_affine is False
    assert verdict.violation_size == 3 or verdict.violation_size == 2
    with pytest.raises(NotAlmostAffine):
        code_rank(code, span(2, 2, (1, 0), (0, 1)))
    with pytest.raises(NotAlmostAffine):
        _ = code.k


def test_json_roundtrip(ex34):
    again = code_from_json(code_to_json(ex34))
    assert (again.tower, again.generators, again.offset) == (ex34.tower, ex34.generators, ex34.offset)
    expl = as_explicit(ex34)
    assert code_from_json(code_to_json(expl)).words == expl.words


def test_gabidulin_code_is_mrd(gab):
    assert min_distance(gab) == 3
    assert classify_linearity(gab).qm_linear
    # brute force over all nonzero codewords
    assert min(rank_weight(gab.tower, w) for w in gab.codewords() if any(w)) == 3


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_equivalence_transports_the_qmatroid(ex34, seed):
    rng = random.Random(seed)
    a = random_invertible(ex34.tower.base, 3, rng)
    t = tuple(rng.randrange(16) for _ in range(3))
    image = apply_equivalence(ex34, a, t)
    phi = equivalence_transport_matrix(ex34.tower.base, a)
    assert equivalence_check_tables(induced_qmatroid(ex34), induced_qmatroid(image), phi)


def test_input_errors(ex34):
    with pytest.raises(DataError):
        parse_scope("dims=-1")
    with pytest.raises(DataError):
        projection_image_size(ex34, span(2, 4, (1, 0, 0, 0)))
    with pytest.raises(DataError):
        additive_code(ex34.tower, [(16, 0, 0)])
    with pytest.raises(DataError):
        apply_equivalence(ex34, [[1, 0, 0], [1, 0, 0], [0, 0, 1]])
