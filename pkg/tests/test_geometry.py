from __future__ import annotations

import numpy as np
import pytest

from qrank.codes import as_explicit, induced_qmatroid
from qrank.errors import DataError, NotSimple
from qrank.geometry import (
    check_simple,
    code_from_geometry,
    flat,
    flat_ops,
    geometry_from_code,
    geometry_from_json,
    parallel_class,
    verify_geometry_properties,
)
from qrank.subspaces import enumerate_subspaces, span


@pytest.fixture(scope="module")
def geo(gab):
    return geometry_from_code(gab)


def test_gabidulin_geometry_satisfies_every_property(geo):
    verdict = verify_geometry_properties(geo, all_bases=True)
    assert verdict.ok
    assert verdict.properties["property2"].exhaustive
    assert verdict.parallelism.ok


def test_roundtrip_code_geometry_code(gab, geo):
    back = code_from_geometry(geo)
    assert set(back.words) == set(gab.codewords())
    basis = [(1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1), (0, 0, 0, 1)]
    other = code_from_geometry(geo, basis)
    assert other.size == gab.size
    with pytest.raises(DataError):
        code_from_geometry(geo, [(1, 0, 0, 0)] * 4)


def test_json_roundtrip_preserves_hyperplanes(geo):
    again = geometry_from_json(geo.to_json())
    for v in geo.directions[:20]:
        assert np.array_equal(again.labels(v), geo.labels(v))
    assert verify_geometry_properties(again, bases=32).ok


def test_corrupted_geometry_is_rejected(geo):
    d = geo.to_json()
    dirs = {tuple(r["direction"]) for r in d["hyperplanes"]}
    first, second = sorted(dirs)[:2]
    # copy the parallel class of one direction onto another
    d["hyperplanes"] = [r for r in d["hyperplanes"] if tuple(r["direction"]) != second]
    d["hyperplanes"] += [dict(r, direction=list(second)) for r in d["hyperplanes"]
                         if tuple(r["direction"]) == first]
    bad = geometry_from_json(d)
    assert not verify_geometry_properties(bad, bases=32).ok


def test_non_simple_code_is_refused(ex34):
    with pytest.raises(NotSimple):
        check_simple(ex34)
    with pytest.raises(NotSimple):
        geometry_from_code(ex34)


def test_parallel_classes_partition_the_code(ex34):
    m = induced_qmatroid(ex34)
    for v in enumerate_subspaces(2, 3):
        blocks = parallel_class(ex34, v)
        assert sum(len(b) for b in blocks) == ex34.size
        assert {len(b) for b in blocks} == {16 ** (2 - m.rank(v))}
        assert flat_ops(ex34, "parallel_check", v=v)


def test_flat_intersection_and_join(ex34):
    words = list(ex34.codewords())
    v, w = span(2, 3, (1, 0, 0)), span(2, 3, (0, 1, 0))
    x = words[17]
    meet = flat_ops(ex34, "intersect", v=v, x=x, w=w, y=x)
    assert meet == flat(ex34, v + w, x)
    join = flat_ops(ex34, "join", v=v, w=w, z=x)
    assert flat(ex34, v, x) <= join and flat(as_explicit(ex34), w, x) <= join
    with pytest.raises(DataError):
        flat_ops(ex34, "bogus")
