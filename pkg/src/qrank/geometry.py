"""Partial affine q-geometries: hyperplane families H_{v,alpha} on a point set,
verification of the four incidence properties, the passage between simple
almost affine codes and geometries, and flat operations inside a code."""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .codes import (
    RankMetricCode,
    code_rank,
    evaluate,
    explicit_code,
    induced_qmatroid,
    log_exact,
    subcode,
)
from .errors import ConsistencyError, DataError, NotSimple
from .fields import FieldTower, tower_from_json, tower_to_json
from .subspaces import (
    DEFAULT_BUDGET,
    Subspace,
    count_subspaces,
    enumerate_subspaces,
    projective_points,
    random_subspace_uniform,
)

Vector = tuple[int, ...]

PROPERTY4_WORK = 1 << 27


def projective_rep(f, v: Sequence[int]) -> tuple[Vector, int]:
    """(r, lam) with v = lam * r and the first nonzero entry of r equal to 1."""
    lead = next((x for x in v if x), 0)
    if not lead:
        raise DataError("the zero vector has no direction")
    inv = f.inv(lead)
    return tuple(f.mul(inv, x) for x in v), lead


@dataclass(eq=False)
class Geometry:
    """Points of F_{q^m}^n with a label map per direction.

    ``table`` maps each projective direction to the array of labels alpha
    with point i in H_{v, alpha}; when absent, labels are the pairing
    <c, v> of the point coordinates with v.  Non-normalised directions are
    read through the scaling rule H_{lam v, lam alpha} = H_{v, alpha}.
    """

    tower: FieldTower
    n: int
    points: np.ndarray
    table: dict[Vector, np.ndarray] | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.int64).reshape(-1, self.n)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def directions(self) -> list[Vector]:
        return projective_points(self.tower.base, self.n)

    def _scaled_columns(self, lam: int) -> list[np.ndarray]:
        key = ("col", lam)
        if key not in self._cache:
            top = self.tower.top
            tab = top.scale_table(self.tower.embed[lam])
            self._cache[key] = [tab[self.points[:, j]] for j in range(self.n)]
        return self._cache[key]

    def _pairing_labels(self, v: Sequence[int]) -> np.ndarray:
        top = self.tower.top
        acc = np.zeros(self.size, dtype=np.int64)
        for j, c in enumerate(v):
            if c:
                acc = top.add_array(acc, self._scaled_columns(c)[j])
        return acc

    def labels(self, v: Sequence[int]) -> np.ndarray:
        """alpha(P) with P in H_{v, alpha(P)}, for every point P."""
        f = self.tower.base
        rep, lam = projective_rep(f, v)
        if self.table is None:
            return self._pairing_labels(tuple(v))
        try:
            base = self.table[rep]
        except KeyError:
            raise DataError(f"no parallel class recorded for direction {rep}") from None
        if lam == 1:
            return base
        return self.tower.top.mul_array(base, self.tower.embed[lam])

    def hyperplane(self, v: Sequence[int], alpha: int) -> np.ndarray:
        """Indices of the points in H_{v, alpha}."""
        return np.flatnonzero(self.labels(v) == alpha)

    def to_json(self) -> dict:
        records = []
        for v in self.directions:
            lab = self.labels(v)
            for alpha in np.unique(lab).tolist():
                records.append({"direction": list(v), "alpha": int(alpha),
                                "members": np.flatnonzero(lab == alpha).tolist()})
        return {"tower": tower_to_json(self.tower), "n": self.n,
                "points": self.points.tolist(), "hyperplanes": records}


def geometry_from_json(d: dict) -> Geometry:
    try:
        tower = tower_from_json(d["tower"])
        n = int(d["n"])
        points = np.asarray(d["points"], dtype=np.int64).reshape(-1, n)
        table: dict[Vector, np.ndarray] = {}
        for rec in d.get("hyperplanes", []):
            rep = tuple(int(x) for x in rec["direction"])
            arr = table.setdefault(rep, np.full(len(points), -1, dtype=np.int64))
            arr[np.asarray(rec["members"], dtype=np.int64)] = int(rec["alpha"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed geometry descriptor: {exc}") from None
    return Geometry(tower, n, points, table or None)


def check_simple(code: RankMetricCode) -> None:
    """Raise NotSimple unless every 1- and 2-dimensional V has rank dim V."""
    f = code.tower.base
    for v in enumerate_subspaces(f, code.n, (1, 2)):
        r = code_rank(code, v)
        if r != v.dim:
            kind = "loop" if v.dim == 1 else "2-dimensional circuit"
            raise NotSimple(f"the induced q-matroid has a {kind} at {v!r}")


def geometry_from_code(code: RankMetricCode) -> Geometry:
    """(C, H) with H_{v,alpha} = {c : <c, v> = alpha}; C must be simple."""
    check_simple(code)
    return Geometry(code.tower, code.n, code.array())


def _partition_signature(labels: np.ndarray) -> str:
    """Hash of the partition induced by a label array, independent of the labels."""
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return hashlib.sha1(rank[inverse.ravel()].tobytes()).hexdigest()


def _joint_key(arrays: Iterable[np.ndarray], size: int, radix: int) -> np.ndarray:
    """Integer key with equal keys exactly for equal label tuples."""
    arrays = list(arrays)
    key = np.zeros(size, dtype=np.int64)
    if radix ** len(arrays) < 1 << 62:
        for arr in arrays:
            key = key * radix + arr
        return key
    for arr in arrays:
        _, key = np.unique(key * radix + arr, return_inverse=True)
        key = key.ravel()
    return key


@dataclass
class PropertyVerdict:
    ok: bool
    exhaustive: bool
    checked: int
    witness: object = None
    note: str = ""

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Subspace):
            w = [list(r) for r in w.rows]
        return {"ok": self.ok, "exhaustive": self.exhaustive, "checked": self.checked,
                "witness": w, "note": self.note}


@dataclass
class GeometryVerdict:
    properties: dict[str, PropertyVerdict]
    parallelism: PropertyVerdict

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.properties.values())

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "properties": {k: v.to_json() for k, v in self.properties.items()},
                "parallelism": self.parallelism.to_json()}


def _property1(g: Geometry) -> tuple[PropertyVerdict, PropertyVerdict]:
    """Every parallel class partitions the points by valid labels; distinct
    directions must not induce the same partition."""
    Q = g.tower.Q
    seen: dict[str, Vector] = {}
    dup = None
    bad = None
    dirs = g.directions
    sizes = set()
    for v in dirs:
        lab = g.labels(v)
        if lab.size and (lab.min() < 0 or lab.max() >= Q):
            bad = bad or list(v)
            continue
        sizes.add(len(np.unique(lab)))
        if g.size > 1:
            sig = _partition_signature(lab)
            if sig in seen and dup is None:
                dup = [list(seen[sig]), list(v)]
            seen.setdefault(sig, v)
    p1 = PropertyVerdict(bad is None, True, len(dirs), bad,
                         "" if bad is None else "a point has no label in this class")
    p1.note = p1.note or f"blocks per class: {sorted(sizes)}"
    par = PropertyVerdict(dup is None, True, len(dirs), dup,
                          "" if dup is None else "non-parallel directions induce the same partition")
    return p1, par


def _bases(f, n: int, count: int, seed: int, all_bases: bool) -> tuple[list[list[Vector]], bool]:
    std = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if all_bases:
        out = [list(c) for c in itertools.combinations(projective_points(f, n), n)
               if linalg.rank(f, [list(v) for v in c]) == n]
        return out, True
    rng = random.Random(seed)
    out = [std]
    while len(out) < count + 1:
        rows = [tuple(rng.randrange(f.order) for _ in range(n)) for _ in range(n)]
        if linalg.rank(f, [list(r) for r in rows]) == n:
            out.append(rows)
    return out, False


def _property2(g: Geometry, bases: int, seed: int, all_bases: bool) -> PropertyVerdict:
    """A basis labelling determines at most one point."""
    f = g.tower.base
    families, exhaustive = _bases(f, g.n, bases, seed, all_bases)
    for basis in families:
        key = _joint_key((g.labels(v) for v in basis), g.size, g.tower.Q)
        if len(np.unique(key)) != g.size:
            return PropertyVerdict(False, exhaustive, len(families), [list(v) for v in basis],
                                   "two points share all basis labels")
    return PropertyVerdict(True, exhaustive, len(families))


def _property3(g: Geometry, points: int, seed: int) -> PropertyVerdict:
    """P in H_{u,a} and H_{v,b} implies P in H_{u+v, a+b}, over all direction
    pairs (u, lam * v) on a sample of points."""
    f, top, emb = g.tower.base, g.tower.top, g.tower.embed
    q, n = f.order, g.n
    if g.size <= points:
        idx = np.arange(g.size)
        exhaustive = True
    else:
        idx = np.sort(np.random.default_rng(seed).choice(g.size, points, replace=False))
        exhaustive = False
    dirs = g.directions
    D = len(dirs)
    dir_arr = np.asarray(dirs, dtype=np.int64).reshape(D, n)
    code_of = np.full(q ** n, -1, dtype=np.int64)
    weights = q ** np.arange(n, dtype=np.int64)
    code_of[dir_arr @ weights] = np.arange(D)
    add_t = np.array([[f.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    mul_t = np.array([[f.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    inv_t = np.array([f.inv(a) if a else 0 for a in range(q)], dtype=np.int64)
    lab = np.stack([g.labels(v)[idx] for v in dirs])
    scaled = np.stack([top.mul_array(lab, emb[lam]) for lam in range(q)])
    checked = 0
    for ui in range(D):
        u = dir_arr[ui]
        for lam in range(1, q):
            w = add_t[u[None, :], mul_t[lam][dir_arr]]
            nonzero = w.any(axis=1)
            lead = w[np.arange(D), np.argmax(w != 0, axis=1)]
            rep = mul_t[inv_t[lead][:, None], w]
            rep_idx = code_of[rep @ weights]
            vs = np.flatnonzero(nonzero)
            lhs = top.add_array(lab[ui][None, :], scaled[lam][vs])
            rhs = scaled[lead[vs], rep_idx[vs]]
            checked += len(vs)
            bad = np.flatnonzero((lhs != rhs).any(axis=1))
            if bad.size:
                v = dirs[int(vs[bad[0]])]
                return PropertyVerdict(False, exhaustive, checked, [list(dirs[ui]), list(v), lam],
                                       "labels are not additive")
    return PropertyVerdict(True, exhaustive, checked, note=f"{len(idx)} points")


def _property4(g: Geometry, seed: int, budget: int | None, subspaces: int) -> PropertyVerdict:
    """All non-empty intersections over a direction set D have equal size.

    By Property 3 the labels on D are determined by those on a basis of
    <D>, so it suffices to range over subspaces V with their canonical bases.
    """
    f, n = g.tower.base, g.n
    total = count_subspaces(n, f.order)
    if g.size * total <= PROPERTY4_WORK and (budget is None or total <= budget):
        spaces = [v for v in enumerate_subspaces(f, n, budget=budget) if v.dim]
        exhaustive = True
    else:
        rng = random.Random(seed)
        spaces = []
        while len(spaces) < subspaces:
            v = random_subspace_uniform(f, n, rng)
            if v.dim:
                spaces.append(v)
        exhaustive = False
    for v in spaces:
        key = _joint_key((g.labels(r) for r in v.rows), g.size, g.tower.Q)
        _, counts = np.unique(key, return_counts=True)
        if counts.min() != counts.max():
            return PropertyVerdict(False, exhaustive, len(spaces), v, "fibres of unequal size")
    return PropertyVerdict(True, exhaustive, len(spaces))


def verify_geometry_properties(g: Geometry, seed: int = 0, bases: int = 256, all_bases: bool = False,
                               sample_points: int = 64, subspaces: int = 256,
                               budget: int | None = DEFAULT_BUDGET) -> GeometryVerdict:
    p1, par = _property1(g)
    props = {
        "property1": p1,
        "property2": _property2(g, bases, seed, all_bases),
        "property3": _property3(g, sample_points, seed),
        "property4": _property4(g, seed, budget, subspaces),
    }
    return GeometryVerdict(props, par)


def code_from_geometry(g: Geometry, basis: Sequence[Sequence[int]] | None = None) -> RankMetricCode:
    """phi_E(P) = (alpha_1, ..., alpha_n) with P in H_{gamma_i, alpha_i}."""
    f, n = g.tower.base, g.n
    if basis is None:
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    basis = [tuple(int(x) for x in r) for r in basis]
    if len(basis) != n or linalg.rank(f, [list(r) for r in basis]) != n:
        raise DataError("coordinatization needs an F_q-basis of F_q^n")
    words = np.stack([g.labels(r) for r in basis], axis=1) if g.size else np.zeros((0, n), dtype=np.int64)
    if len(np.unique(words, axis=0)) != g.size:
        raise DataError("coordinatization collision: Property 2 fails for this basis")
    return explicit_code(g.tower, words.tolist(), n)


# ---------------------------------------------------------------------------
# flats inside a code
# ---------------------------------------------------------------------------

def flat(code: RankMetricCode, v: Subspace, x: Sequence[int]) -> frozenset:
    """The flat C(V, x) as a set of codewords."""
    return frozenset(subcode(code, v, x).codewords())


def flat_dimension(code: RankMetricCode, members: frozenset) -> int:
    d = log_exact(len(members), code.Q)
    if d is None:
        raise ConsistencyError("flat size is not a power of q^m")
    return d


def flat_intersection(code: RankMetricCode, v: Subspace, x, w: Subspace, y) -> frozenset:
    """C(V,x) & C(W,y); when non-empty it must equal C(V+W, z) for a shared z."""
    meet = flat(code, v, x) & flat(code, w, y)
    if meet:
        z = min(meet)
        if meet != flat(code, v + w, z):
            raise ConsistencyError("intersection of flats is not C(V+W, z)")
    return meet


def flat_join(code: RankMetricCode, v: Subspace, w: Subspace, z) -> frozenset:
    """Smallest flat containing C(V,z) and C(W,z): C(V & W, z), with the
    dimension bound dim(L1 & L2) >= dim L1 + dim L2 - dim(L1 v L2)."""
    l1, l2 = flat(code, v, z), flat(code, w, z)
    join = flat(code, v & w, z)
    if not (l1 <= join and l2 <= join):
        raise ConsistencyError("join does not contain both flats")
    d = lambda s: flat_dimension(code, s)
    if d(l1 & l2) < d(l1) + d(l2) - d(join) or d(l1) + d(l2) - d(join) < d(l1) + d(l2) - code.k:
        raise ConsistencyError("join dimension bound violated")
    return join


def parallel_class(code: RankMetricCode, v: Subspace) -> list[frozenset]:
    """The flats C(V, x), x in C, as a partition of C."""
    blocks: dict = {}
    tower = code.tower
    for c in code.codewords():
        blocks.setdefault(evaluate(tower, v.rows, c), set()).add(c)
    return sorted((frozenset(b) for b in blocks.values()), key=min)


def hyperplane_pair(code: RankMetricCode, v: Subspace, x, w: Subspace, y) -> int | None:
    """Dimension of the intersection of two distinct intersecting hyperplanes
    (must be dim C - 2), or None when they are disjoint."""
    m = induced_qmatroid(code)
    k = code.k
    if m.rank(v) != 1 or m.rank(w) != 1:
        raise DataError("both flats must be hyperplanes (rank-1 defining spaces)")
    h1, h2 = flat(code, v, x), flat(code, w, y)
    if h1 == h2:
        raise DataError("hyperplanes must be distinct")
    meet = h1 & h2
    if not meet:
        return None
    d = flat_dimension(code, meet)
    if d != k - 2:
        raise ConsistencyError("distinct intersecting hyperplanes must meet in dimension k-2")
    return d


def flat_ops(code: RankMetricCode, task: str, **kw):
    if task == "intersect":
        return flat_intersection(code, kw["v"], kw["x"], kw["w"], kw["y"])
    if task == "join":
        return flat_join(code, kw["v"], kw["w"], kw["z"])
    if task == "parallel_check":
        blocks = parallel_class(code, kw["v"])
        sizes = {len(b) for b in blocks}
        expected = code.Q ** (code.k - induced_qmatroid(code).rank(kw["v"]))
        return sizes == {expected} and sum(len(b) for b in blocks) == code.size
    if task == "hyperplane_pair":
        return hyperplane_pair(code, kw["v"], kw["x"], kw["w"], kw["y"])
    raise DataError(f"unknown flat task {task!r}")
