from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from qrank.errors import DataError
from qrank.fields import field_of_order as field_make
from qrank.subspaces import (
    canonicalize,
    count_subspaces,
    direct_complement,
    enumerate_subspaces,
    full_space,
    gaussian_binomial,
    is_direct_complement,
    lattice_ops,
    orthogonal_complement,
    projective_points,
    random_subspace,
    span,
    subspace_from_json,
    zero_space,
)


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2), (3, 3), (2, 4), (4, 3), (3, 5)])
def test_enumeration_counts_match_gaussian_binomials(n, q):
    subs = list(enumerate_subspaces(field_make(q), n))
    assert len(subs) == len(set(subs))
    for k in range(n + 1):
        assert sum(1 for s in subs if s.dim == k) == gaussian_binomial(n, k, q)
    assert len(subs) == count_subspaces(n, q)


def test_gaussian_binomial_small_values():
    assert [gaussian_binomial(4, k, 2) for k in range(5)] == [1, 15, 35, 15, 1]
    assert gaussian_binomial(3, 1, 3) == 13
    assert gaussian_binomial(2, 3, 2) == 0


def test_subspaces_of_f4_5():
    # 1 + 341 + 5797 + 5797 + 341 + 1
    assert count_subspaces(5, 4) == 12278


def test_span_sets_of_f2_3_by_brute_force():
    vecs = list(itertools.product(range(2), repeat=3))
    spans = set()
    for r in range(4):
        for gens in itertools.combinations(vecs, r):
            closed = {tuple(sum(c * g[i] for c, g in zip(cs, gens)) % 2 for i in range(3))
                      for cs in itertools.product(range(2), repeat=r)}
            spans.add(frozenset(closed) if closed else frozenset({(0, 0, 0)}))
    enumerated = {frozenset(s.vectors()) for s in enumerate_subspaces(2, 3)}
    assert enumerated == spans


@st.composite
def subspace_pair(draw):
    q, n = draw(st.sampled_from([(2, 4), (3, 3), (4, 3), (2, 5)]))
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    f = field_make(q)
    a = random_subspace(f, n, draw(st.integers(0, n)), rng)
    b = random_subspace(f, n, draw(st.integers(0, n)), rng)
    c = random_subspace(f, n, draw(st.integers(0, n)), rng)
    return f, a, b, c


@given(subspace_pair())
def test_canonical_form_is_generator_independent(data):
    f, a, _, _ = data
    rng = random.Random(a.dim)
    # random invertible recombination of the rows, plus a redundant row
    rows = [list(r) for r in a.rows]
    mixed = []
    for i in range(len(rows)):
        coeffs = [rng.randrange(f.order) for _ in rows]
        coeffs[i] = coeffs[i] or 1
        w = [0] * a.n
        for c, r in zip(coeffs, rows):
            w = [f.add(x, f.mul(c, y)) for x, y in zip(w, r)]
        mixed.append(w)
    if canonicalize(f, mixed, a.n).dim == a.dim:
        assert canonicalize(f, mixed + [[0] * a.n], a.n) == a
    assert canonicalize(f, list(a.rows) + list(a.rows), a.n) == a


@given(subspace_pair())
def test_lattice_laws(data):
    f, a, b, c = data
    join, meet = a + b, a & b
    assert join.dim + meet.dim == a.dim + b.dim
    assert a.perp().perp() == a
    assert a.perp().dim == a.n - a.dim
    assert (a + b).perp() == a.perp() & b.perp()
    assert lattice_ops(a, b, "sum") == join
    assert lattice_ops(a, b, "intersect") == meet
    if a <= c:
        # modular law
        assert a + (b & c) == (a + b) & c
    for v in a.vectors():
        for w in a.perp().vectors():
            acc = 0
            for x, y in zip(v, w):
                acc = f.add(acc, f.mul(x, y))
            assert acc == 0


@given(subspace_pair())
def test_direct_complement(data):
    _, a, _, _ = data
    c = direct_complement(a)
    assert is_direct_complement(a, c)
    assert (a + c).dim == a.n
    assert (a & c).dim == 0


def test_orthogonal_complement_and_json():
    f = field_make(3)
    v = span(f, 3, (1, 2, 0))
    assert orthogonal_complement(v) == v.perp()
    assert subspace_from_json(v.to_json()) == v
    assert zero_space(f, 3).perp() == full_space(f, 3)


def test_projective_points_count():
    assert len(projective_points(field_make(4), 3)) == gaussian_binomial(3, 1, 4)


def test_mixed_ambients_rejected():
    with pytest.raises(DataError):
        _ = span(2, 3, (1, 0, 0)) + span(2, 4, (1, 0, 0, 0))
