from __future__ import annotations

import pytest

from qrank.codes import induced_qmatroid
from qrank.errors import DataError
from qrank.ports import (
    ADVERSARY,
    GAMMA,
    Port,
    connectivity,
    gamma_min,
    is_vertical_separation,
    port_predicates,
    vertical_separations,
)
from qrank.qmatroids import QMatroid, uniform_make
from qrank.subspaces import direct_complement, enumerate_subspaces, gaussian_binomial, span, zero_space
from qrank.verification import _e


def brute_force_separations(m: QMatroid, t: int) -> set[frozenset]:
    subs = list(enumerate_subspaces(m.field, m.n))
    full = m.full_rank
    out = set()
    for a in subs:
        for b in subs:
            if (a & b).dim or (a + b).dim != m.n:
                continue
            ra, rb = m.rank(a), m.rank(b)
            if min(ra, rb) >= t and ra + rb - full < t:
                out.add(frozenset((a, b)))
    return out


@pytest.mark.parametrize("n,k,q", [(3, 2, 2), (4, 2, 2), (3, 1, 3)])
def test_uniform_port_threshold(n, k, q):
    m = uniform_make(n, k, q)
    p0 = span(q, n, _e(n, 1))
    port = Port(m, p0, direct_complement(p0))
    for v, cls in port.classes.items():
        assert cls == (GAMMA if v.dim >= k else ADVERSARY)
    assert zero_space(q, n) in port.classes and port.classes[zero_space(q, n)] == ADVERSARY
    gmin = gamma_min(port)
    assert all(g.dim == k for g in gmin)
    assert len(gmin) == gaussian_binomial(n - 1, k, q)
    verdict = port_predicates(port)
    assert verdict.perfect and verdict.ideal


def test_port_errors():
    m = uniform_make(3, 2, 2)
    p0 = span(2, 3, _e(3, 1))
    with pytest.raises(DataError):
        Port(m, p0, span(2, 3, _e(3, 1, 2)))
    with pytest.raises(DataError):
        Port(m, zero_space(2, 3), enumerate_subspaces(2, 3, 3).__next__())
    port = Port(m, p0, direct_complement(p0))
    with pytest.raises(DataError):
        port.classify(p0)
    with pytest.raises(DataError):
        vertical_separations(m, 0)


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 2)])
def test_uniform_is_never_separated(n, k):
    m = uniform_make(n, k, 2)
    assert connectivity(m) is None
    for t in range(1, k + 1):
        assert brute_force_separations(m, t) == set()


def test_disconnected_code_separations(port_code):
    m = induced_qmatroid(port_code)
    for t in (1, 2):
        found = {frozenset((s.a, s.b)) for s in vertical_separations(m, t)}
        assert found == brute_force_separations(m, t)
    seps = vertical_separations(m, 1)
    assert frozenset((span(2, 4, _e(4, 1), _e(4, 2)), span(2, 4, _e(4, 3), _e(4, 4)))) in {
        frozenset((s.a, s.b)) for s in seps}
    assert all(is_vertical_separation(m, s.a, s.b, 1) for s in seps)
    assert connectivity(m) == 1


def test_random_mode_finds_only_true_separations(port_code):
    m = induced_qmatroid(port_code)
    truth = brute_force_separations(m, 1)
    seps = vertical_separations(m, 1, mode="random", samples=300, seed=3)
    assert seps
    assert all(frozenset((s.a, s.b)) in truth for s in seps)
