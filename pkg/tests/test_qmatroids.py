from __future__ import annotations

import pytest

from qrank.codes import induced_qmatroid, puncture, shorten
from qrank.errors import DataError
from qrank.qmatroids import (
    QMatroid,
    circuits,
    closure,
    contract,
    dual,
    flats,
    is_simple,
    loops,
    rank_table_from_json,
    rank_table_to_json,
    restrict,
    tables_equal,
    uniform_make,
    vamos_make,
    verify_axioms,
)
from qrank.subspaces import enumerate_subspaces, gaussian_binomial, span

UNIFORM = [(3, 1, 2), (3, 2, 2), (4, 2, 2), (3, 1, 3), (2, 1, 4)]


@pytest.mark.parametrize("n,k,q", UNIFORM)
def test_uniform_axioms_in_both_forms(n, k, q):
    m = uniform_make(n, k, q)
    assert verify_axioms(m, "global").ok
    assert verify_axioms(m, "local").ok


@pytest.mark.parametrize("n,k,q", UNIFORM)
def test_uniform_duality(n, k, q):
    m = uniform_make(n, k, q)
    assert tables_equal(dual(m), uniform_make(n, n - k, q))
    assert tables_equal(dual(dual(m)), m)


@pytest.mark.parametrize("n,k,q", UNIFORM)
def test_uniform_circuits_and_flats(n, k, q):
    m = uniform_make(n, k, q)
    cs = circuits(m)
    assert all(c.dim == k + 1 for c in cs)
    assert len(cs) == gaussian_binomial(n, k + 1, q)
    fl = flats(m)
    assert len(fl) == sum(gaussian_binomial(n, d, q) for d in range(k)) + 1
    assert is_simple(m) == (k >= 2)


def test_circuits_of_rank_one_uniform():
    m = uniform_make(3, 1, 2)
    assert len(circuits(m)) == 7  # every 2-dimensional subspace of F_2^3
    assert loops(m) == []
    v = span(2, 3, (1, 0, 0))
    assert closure(m, v).dim == 3


def _broken_table(q: int, n: int, k: int, target_dim: int) -> QMatroid:
    m = uniform_make(n, k, q)
    table = m.table()
    victim = next(v for v in table if v.dim == target_dim)
    table[victim] = table[victim] - 1
    return m.with_table(table)


def test_broken_tables_fail_the_axioms():
    # full space ranked below its planes breaks monotonicity
    bad = _broken_table(2, 3, 2, 3)
    assert not verify_axioms(bad, "global").ok
    assert not verify_axioms(bad, "local").ok
    raised = uniform_make(3, 1, 2).table()
    raised[next(v for v in raised if v.dim == 1)] = 2
    verdict = verify_axioms(QMatroid(2, 3, table=raised), "global")
    assert not verdict.ok and verdict.axiom == "R1"


def test_vamos_is_a_qmatroid_on_a_sample():
    m = vamos_make(2)
    assert verify_axioms(m, "global", sample=300, seed=1).ok
    assert verify_axioms(m, "local", sample=300, seed=1).ok


def test_minors_of_code_qmatroids(ex34):
    m = induced_qmatroid(ex34)
    words = list(ex34.codewords())
    for z in enumerate_subspaces(2, 3, (1, 2)):
        assert tables_equal(induced_qmatroid(puncture(ex34, z)), restrict(m, z))
        assert tables_equal(induced_qmatroid(shorten(ex34, z, words[5])), contract(m, z))


def test_dual_axioms_for_code_qmatroid(ex34):
    m = induced_qmatroid(ex34)
    assert verify_axioms(dual(m)).ok
    assert dual(m).full_rank == 1


def test_rank_table_json_roundtrip():
    m = uniform_make(3, 2, 3)
    again = rank_table_from_json(rank_table_to_json(m))
    assert tables_equal(again, m)
    d = rank_table_to_json(m)
    d["table"].pop()
    with pytest.raises(DataError):
        rank_table_from_json(d)
    with pytest.raises(DataError):
        uniform_make(2, 3, 2)
