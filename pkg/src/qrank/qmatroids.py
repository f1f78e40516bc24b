"""q-matroids as memoised rank oracles on the subspace lattice of F_q^n."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import linalg
from .errors import DataError
from .fields import FieldSpec
from .subspaces import (
    DEFAULT_BUDGET,
    Subspace,
    _as_field,
    canonicalize,
    count_subspaces,
    direct_complement,
    enumerate_subspaces,
    full_space,
    projective_points,
    random_subspace,
    random_subspace_uniform,
    subspaces_within,
    zero_space,
)

RankFn = Callable[[Subspace], int]


class QMatroid:
    """Ground space F_q^n with a rank function evaluated lazily and memoised."""

    def __init__(self, field: FieldSpec | int, n: int, rank_fn: RankFn | None = None,
                 origin: str = "derived", table: dict[Subspace, int] | None = None):
        self.field = _as_field(field)
        self.n = n
        self.origin = origin
        self._fn = rank_fn
        self._memo: dict[Subspace, int] = dict(table) if table else {}
        if rank_fn is None and table is None:
            raise DataError("a q-matroid needs a rank function or a table")

    def __repr__(self) -> str:
        return f"QMatroid(q={self.q}, n={self.n}, origin={self.origin!r})"

    @property
    def q(self) -> int:
        return self.field.order

    def rank(self, v: Subspace) -> int:
        r = self._memo.get(v)
        if r is None:
            if v.n != self.n or v.field != self.field:
                raise DataError("subspace does not live in the ground space")
            if self._fn is None:
                raise DataError(f"no rank recorded for {v!r}")
            r = self._fn(v)
            self._memo[v] = r
        return r

    def rank_of(self, *vectors: Sequence[int]) -> int:
        return self.rank(canonicalize(self.field, vectors, self.n))

    @property
    def ground(self) -> Subspace:
        return full_space(self.field, self.n)

    @property
    def full_rank(self) -> int:
        return self.rank(self.ground)

    def subspaces(self, budget: int | None = DEFAULT_BUDGET) -> list[Subspace]:
        return _all_subspaces(self.field, self.n, budget)

    def table(self, budget: int | None = DEFAULT_BUDGET) -> dict[Subspace, int]:
        """Full rank table in enumeration order."""
        return {v: self.rank(v) for v in self.subspaces(budget)}

    def is_independent(self, v: Subspace) -> bool:
        return self.rank(v) == v.dim

    def with_table(self, table: dict[Subspace, int], origin: str | None = None) -> "QMatroid":
        return QMatroid(self.field, self.n, None, origin or self.origin, table)


_SUBSPACE_CACHE: dict[tuple, list[Subspace]] = {}


def _all_subspaces(f: FieldSpec, n: int, budget: int | None = DEFAULT_BUDGET) -> list[Subspace]:
    key = (f, n)
    got = _SUBSPACE_CACHE.get(key)
    if got is None:
        got = list(enumerate_subspaces(f, n, None, budget))
        if len(got) <= 1 << 16:
            _SUBSPACE_CACHE[key] = got
    return got


def tables_equal(m1: QMatroid, m2: QMatroid, budget: int | None = DEFAULT_BUDGET) -> bool:
    if m1.field != m2.field or m1.n != m2.n:
        return False
    return all(m1.rank(v) == m2.rank(v) for v in m1.subspaces(budget))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def uniform_make(n: int, k: int, q: FieldSpec | int) -> QMatroid:
    if not 0 <= k <= n:
        raise DataError("uniform q-matroid needs 0 <= k <= n")
    return QMatroid(q, n, lambda v: min(v.dim, k), origin="uniform")


VAMOS_SETS = ((1, 2, 3, 4), (1, 4, 5, 6), (2, 3, 5, 6), (1, 4, 7, 8), (2, 3, 7, 8))


def vamos_spans(q: FieldSpec | int) -> list[Subspace]:
    """The five designated 4-dimensional coordinate spans, using xi(i) = e_i."""
    f = _as_field(q)
    out = []
    for ys in VAMOS_SETS:
        out.append(canonicalize(f, [[int(j == i - 1) for j in range(8)] for i in ys], 8))
    return out


def vamos_make(q: FieldSpec | int) -> QMatroid:
    special = frozenset(vamos_spans(q))

    def rank(v: Subspace) -> int:
        return 3 if v in special else min(v.dim, 4)

    return QMatroid(q, 8, rank, origin="vamos")


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

@dataclass
class AxiomVerdict:
    ok: bool
    mode: str
    exhaustive: bool
    checked: int
    axiom: str | None = None
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "mode": self.mode,
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "axiom": self.axiom,
            "counterexample": None if self.counterexample is None
            else [s.to_json() for s in self.counterexample],
        }


def _check_global_pair(m: QMatroid, v: Subspace, w: Subspace) -> str | None:
    rv, rw = m.rank(v), m.rank(w)
    if v <= w and rv > rw:
        return "R2"
    if w <= v and rw > rv:
        return "R2"
    if m.rank(v + w) + m.rank(v & w) > rv + rw:
        return "R3"
    return None


def verify_axioms(m: QMatroid, mode: str = "global", sample: int | None = None,
                  seed: int = 0, budget: int | None = DEFAULT_BUDGET) -> AxiomVerdict:
    """Check (R1)-(R3) over pairs or (R1')-(R3') over triples (V, x, y).

    With ``sample`` set, that many random instances are drawn instead of the
    exhaustive sweep.
    """
    rng = random.Random(seed)
    f, n = m.field, m.n
    if mode == "global":
        if sample is None:
            subs = m.subspaces(budget)
            for v in subs:
                r = m.rank(v)
                if not 0 <= r <= v.dim:
                    return AxiomVerdict(False, mode, True, 0, "R1", (v,))
            checked = 0
            for v in subs:
                for w in subs:
                    checked += 1
                    bad = _check_global_pair(m, v, w)
                    if bad:
                        return AxiomVerdict(False, mode, True, checked, bad, (v, w))
            return AxiomVerdict(True, mode, True, checked)
        for t in range(sample):
            v = random_subspace_uniform(f, n, rng)
            # bias towards comparable pairs half of the time so R2 is exercised
            if t % 2:
                w = v + random_subspace_uniform(f, n, rng)
            else:
                w = random_subspace_uniform(f, n, rng)
            for s in (v, w):
                if not 0 <= m.rank(s) <= s.dim:
                    return AxiomVerdict(False, mode, False, t + 1, "R1", (s,))
            bad = _check_global_pair(m, v, w)
            if bad:
                return AxiomVerdict(False, mode, False, t + 1, bad, (v, w))
        return AxiomVerdict(True, mode, False, sample)
    if mode == "local":
        if m.rank(zero_space(f, n)) != 0:
            return AxiomVerdict(False, mode, sample is None, 1, "R1'", (zero_space(f, n),))
        lines = [canonicalize(f, [pt], n) for pt in projective_points(f, n)]
        if sample is None:
            subs = m.subspaces(budget)
            triples = ((v, x, y) for v in subs for x in lines for y in lines)
        else:
            triples = ((random_subspace_uniform(f, n, rng), rng.choice(lines), rng.choice(lines))
                       for _ in range(sample))
        checked = 0
        for v, x, y in triples:
            checked += 1
            rv = m.rank(v)
            rx = m.rank(v + x)
            ry = m.rank(v + y)
            if not (rv <= rx <= rv + 1) or not (rv <= ry <= rv + 1):
                return AxiomVerdict(False, mode, sample is None, checked, "R2'", (v, x, y))
            if rv == rx == ry and m.rank(v + x + y) != rv:
                return AxiomVerdict(False, mode, sample is None, checked, "R3'", (v, x, y))
        return AxiomVerdict(True, mode, sample is None, checked)
    raise ValueError(f"unknown axiom mode {mode!r}")


# ---------------------------------------------------------------------------
# derived q-matroids
# ---------------------------------------------------------------------------

def dual(m: QMatroid) -> QMatroid:
    """rho*(V) = dim V - rho(E) + rho(V^perp)."""
    def rank(v: Subspace) -> int:
        return v.dim - m.full_rank + m.rank(v.perp())

    return QMatroid(m.field, m.n, rank, origin=f"dual({m.origin})")


def restriction_embedding(z: Subspace) -> list[list[int]]:
    """Rows of the canonical basis of z; U in F_q^{dim z} maps to U * rows."""
    return [list(r) for r in z.rows]


def restrict(m: QMatroid, z: Subspace) -> QMatroid:
    """M|_Z on F_q^{dim Z}, identified with Z through Z's canonical basis."""
    f = m.field
    basis = restriction_embedding(z)

    def rank(u: Subspace) -> int:
        if not u.rows:
            return 0
        return m.rank(canonicalize(f, linalg.matmul(f, u.rows, basis), m.n))

    return QMatroid(f, z.dim, rank, origin=f"restrict({m.origin})")


def contract(m: QMatroid, z: Subspace, complement: Subspace | None = None) -> QMatroid:
    """M/Z on F_q^{n - dim Z}, indexing E/Z through a complement of Z.

    U maps to U * G_C + Z, which is the preimage of the corresponding
    subspace of E/Z.
    """
    f = m.field
    comp = complement if complement is not None else direct_complement(z)
    basis = [list(r) for r in comp.rows]
    rz = m.rank(z)

    def rank(u: Subspace) -> int:
        lifted = linalg.matmul(f, u.rows, basis) if u.rows else []
        return m.rank(canonicalize(f, list(lifted) + [list(r) for r in z.rows], m.n)) - rz

    return QMatroid(f, comp.dim, rank, origin=f"contract({m.origin})")


def transport(m: QMatroid, iso: Sequence[Sequence[int]]) -> QMatroid:
    """The q-matroid phi(M) where phi(v) = iso * v on column vectors."""
    f = m.field
    inv_t = linalg.transpose(linalg.inverse(f, iso))

    def rank(v: Subspace) -> int:
        if not v.rows:
            return m.rank(v)
        return m.rank(canonicalize(f, linalg.matmul(f, v.rows, inv_t), m.n))

    return QMatroid(f, m.n, rank, origin=f"transport({m.origin})")


def equivalence_check_tables(m1: QMatroid, m2: QMatroid, iso: Sequence[Sequence[int]],
                             budget: int | None = DEFAULT_BUDGET) -> bool:
    """Whether rho2(phi(V)) = rho1(V) for all V, with phi(v) = iso * v."""
    if m1.n != m2.n or m1.field != m2.field:
        raise DataError("q-matroids have different ground spaces")
    if len(iso) != m1.n or any(len(r) != m1.n for r in iso):
        raise DataError("isomorphism has the wrong shape")
    f = m1.field
    if not linalg.is_invertible(f, iso):
        raise DataError("isomorphism is singular")
    iso_t = linalg.transpose(iso)
    for v in m1.subspaces(budget):
        image = canonicalize(f, linalg.matmul(f, v.rows, iso_t), m1.n) if v.rows else v
        if m2.rank(image) != m1.rank(v):
            return False
    return True


# ---------------------------------------------------------------------------
# circuits, closure, flats
# ---------------------------------------------------------------------------

def hyperplanes_of(v: Subspace) -> list[Subspace]:
    if v.dim == 0:
        return []
    return subspaces_within(v, v.dim - 1)


def is_circuit(m: QMatroid, v: Subspace) -> bool:
    if v.dim == 0 or m.rank(v) == v.dim:
        return False
    return all(m.rank(h) == h.dim for h in hyperplanes_of(v))


def circuits(m: QMatroid, max_dim: int | None = None, budget: int | None = DEFAULT_BUDGET) -> list[Subspace]:
    dims = range(1, (m.n if max_dim is None else min(max_dim, m.n)) + 1)
    return [v for v in enumerate_subspaces(m.field, m.n, dims, budget) if is_circuit(m, v)]


def loops(m: QMatroid) -> list[Subspace]:
    return [v for v in enumerate_subspaces(m.field, m.n, 1) if m.rank(v) == 0]


def is_simple(m: QMatroid, budget: int | None = DEFAULT_BUDGET) -> bool:
    """No circuits of dimension 1 or 2, i.e. every space of dim <= 2 is independent."""
    return all(m.rank(v) == v.dim for v in enumerate_subspaces(m.field, m.n, (1, 2), budget))


def closure(m: QMatroid, v: Subspace) -> Subspace:
    f, n = m.field, m.n
    rv = m.rank(v)
    gens = [list(r) for r in v.rows]
    for pt in projective_points(f, n):
        if v.contains_vector(pt):
            continue
        if m.rank(v + canonicalize(f, [pt], n)) == rv:
            gens.append(list(pt))
    cl = canonicalize(f, gens, n)
    return cl


def is_flat(m: QMatroid, v: Subspace) -> bool:
    f, n = m.field, m.n
    rv = m.rank(v)
    for pt in projective_points(f, n):
        if not v.contains_vector(pt) and m.rank(v + canonicalize(f, [pt], n)) == rv:
            return False
    return True


def flats(m: QMatroid, budget: int | None = DEFAULT_BUDGET) -> list[Subspace]:
    return [v for v in m.subspaces(budget) if is_flat(m, v)]


def closure_and_flats(m: QMatroid, v: Subspace | None = None):
    return flats(m) if v is None else closure(m, v)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def rank_table_to_json(m: QMatroid, budget: int | None = DEFAULT_BUDGET) -> dict:
    return {
        "q": m.q,
        "n": m.n,
        "origin": m.origin,
        "table": [{"subspace": [list(r) for r in v.rows], "rank": r} for v, r in m.table(budget).items()],
    }


def rank_table_from_json(d: dict) -> QMatroid:
    from .fields import field_of_order

    try:
        f = field_of_order(int(d["q"]))
        n = int(d["n"])
        table = {canonicalize(f, e["subspace"], n): int(e["rank"]) for e in d["table"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed rank table: {exc}") from None
    if len(table) != count_subspaces(n, f.order):
        raise DataError("rank table does not cover the whole lattice")
    return QMatroid(f, n, None, d.get("origin", "derived"), table)


def sample_subspaces(f: FieldSpec | int, n: int, count: int, seed: int = 0,
                     dims: Iterable[int] | None = None) -> list[Subspace]:
    rng = random.Random(seed)
    f = _as_field(f)
    if dims is None:
        return [random_subspace_uniform(f, n, rng) for _ in range(count)]
    dims = list(dims)
    return [random_subspace(f, n, rng.choice(dims), rng) for _ in range(count)]

