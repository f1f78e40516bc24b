"""Subspaces of F_q^n in canonical reduced row echelon form.

A :class:`Subspace` is the key type for every lattice-indexed table in the
package.  Enumeration is deterministic: by dimension, then lexicographically
by canonical rows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from . import linalg
from .errors import BudgetExceeded, DataError
from .fields import FieldSpec, field_of_order

DEFAULT_BUDGET = 1 << 22

Vector = tuple[int, ...]


def _as_field(f: FieldSpec | int) -> FieldSpec:
    return f if isinstance(f, FieldSpec) else field_of_order(int(f))


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    n: int
    rows: tuple[Vector, ...]

    def __repr__(self) -> str:
        body = ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.rows)
        return f"<{body}>_{self.q}^{self.n}"

    def sort_key(self) -> tuple:
        """Enumeration order: dimension, then canonical rows."""
        return (self.dim, self.rows)

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def dim(self) -> int:
        return len(self.rows)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.rows)

    def _same_ambient(self, other: "Subspace") -> None:
        if self.field != other.field or self.n != other.n:
            raise DataError("subspaces live in different ambient spaces")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        return canonicalize(self.field, self.rows + other.rows, self.n)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        return (self.perp() + other.perp()).perp()

    def __le__(self, other: "Subspace") -> bool:
        self._same_ambient(other)
        return self.dim <= other.dim and (self + other).dim == other.dim

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __gt__(self, other: "Subspace") -> bool:
        return other < self

    def contains_vector(self, v: Sequence[int]) -> bool:
        """Reduce v against the echelon rows."""
        f = self.field
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                nc = f.neg(c)
                v = [f.add(a, f.mul(nc, b)) if b else a for a, b in zip(v, row)]
        return not any(v)

    def perp(self) -> "Subspace":
        """Orthogonal complement under the standard dot product."""
        return _perp(self)

    def vectors(self) -> Iterator[Vector]:
        """All q^dim vectors of the space, coefficient tuples in lex order."""
        f = self.field
        for coeffs in itertools.product(range(f.order), repeat=self.dim):
            yield combine(f, coeffs, self.rows, self.n)

    def image(self, matrix: Sequence[Sequence[int]]) -> "Subspace":
        """Image under the row action v -> v * matrix (matrix is n x n')."""
        out = linalg.matmul(self.field, self.rows, matrix) if self.rows else []
        ncols = len(matrix[0]) if matrix else 0
        return canonicalize(self.field, out, ncols)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "rows": [list(r) for r in self.rows]}


@lru_cache(maxsize=1 << 16)
def _perp(s: Subspace) -> Subspace:
    if not s.rows:
        return full_space(s.field, s.n)
    basis = linalg.nullspace(s.field, s.rows, s.n)
    return canonicalize(s.field, basis, s.n)


def combine(f: FieldSpec, coeffs: Sequence[int], rows: Sequence[Sequence[int]], n: int) -> Vector:
    out = [0] * n
    for c, row in zip(coeffs, rows):
        if c:
            for i, x in enumerate(row):
                if x:
                    out[i] = f.add(out[i], f.mul(c, x))
    return tuple(out)


def canonicalize(f: FieldSpec | int, generators: Iterable[Sequence[int]], n: int | None = None) -> Subspace:
    """Canonical subspace spanned by the given generators."""
    f = _as_field(f)
    gens = [list(g) for g in generators]
    if n is None:
        if not gens:
            raise DataError("ambient dimension required for an empty generator set")
        n = len(gens[0])
    for g in gens:
        if len(g) != n:
            raise DataError("generator length does not match ambient dimension")
        for x in g:
            if not 0 <= x < f.order:
                raise DataError(f"{x} is not an element of F_{f.order}")
    red, _ = linalg.rref(f, gens)
    return Subspace(f, n, tuple(tuple(r) for r in red))


def zero_space(f: FieldSpec | int, n: int) -> Subspace:
    return Subspace(_as_field(f), n, ())


def full_space(f: FieldSpec | int, n: int) -> Subspace:
    return Subspace(_as_field(f), n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def unit_vector(n: int, i: int) -> Vector:
    return tuple(int(j == i) for j in range(n))


def span(f: FieldSpec | int, n: int, *vectors: Sequence[int]) -> Subspace:
    return canonicalize(f, vectors, n)


def lattice_ops(a: Subspace, b: Subspace, op: str):
    if op == "sum":
        return a + b
    if op == "intersect":
        return a & b
    if op == "contains":
        return b <= a
    raise ValueError(f"unknown lattice operation {op!r}")


def orthogonal_complement(v: Subspace) -> Subspace:
    return v.perp()


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n or n < 0:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** n - q ** i
        den *= q ** k - q ** i
    return num // den


def count_subspaces(n: int, q: int, dim: int | None = None) -> int:
    if dim is not None:
        return gaussian_binomial(n, dim, q)
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def _rref_of_dim(f: FieldSpec, n: int, k: int) -> list[Subspace]:
    q = f.order
    out = []
    for piv in itertools.combinations(range(n), k):
        pset = set(piv)
        slots = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pset]
        for values in itertools.product(range(q), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for r, pc in enumerate(piv):
                rows[r][pc] = 1
            for (r, c), val in zip(slots, values):
                rows[r][c] = val
            out.append(Subspace(f, n, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda s: s.rows)
    return out


def enumerate_subspaces(
    f: FieldSpec | int,
    n: int,
    dim: int | Iterable[int] | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> Iterator[Subspace]:
    """Every subspace of F_q^n exactly once, dimension-major then lexicographic.

    Raises BudgetExceeded before emitting anything if the count is too large.
    """
    f = _as_field(f)
    if dim is None:
        dims = list(range(n + 1))
    elif isinstance(dim, int):
        dims = [dim] if 0 <= dim <= n else []
    else:
        dims = sorted(d for d in set(dim) if 0 <= d <= n)
    needed = sum(gaussian_binomial(n, d, f.order) for d in dims)
    if budget is not None and needed > budget:
        raise BudgetExceeded(needed, budget)
    for d in dims:
        yield from _rref_of_dim(f, n, d)


def subspaces_within(z: Subspace, dim: int | None = None, budget: int | None = DEFAULT_BUDGET) -> list[Subspace]:
    """All subspaces of z (as subspaces of the ambient), sorted canonically."""
    f = z.field
    out = []
    for u in enumerate_subspaces(f, z.dim, dim, budget):
        out.append(canonicalize(f, linalg.matmul(f, u.rows, z.rows) if u.rows else [], z.n))
    out.sort(key=Subspace.sort_key)
    return out


def direct_complement(z: Subspace) -> Subspace:
    """Greedy complement: add the lowest-index standard vectors not yet spanned."""
    f, n = z.field, z.n
    current = z
    chosen = []
    for i in range(n):
        if current.dim == n:
            break
        e = unit_vector(n, i)
        if not current.contains_vector(e):
            chosen.append(e)
            current = canonicalize(f, current.rows + (e,), n)
    return canonicalize(f, chosen, n)


def is_direct_complement(z: Subspace, c: Subspace) -> bool:
    return z.dim + c.dim == z.n and (z + c).dim == z.n


def projective_points(f: FieldSpec | int, n: int) -> list[Vector]:
    """Nonzero vectors whose first nonzero entry is 1, in lexicographic order."""
    f = _as_field(f)
    out = []
    for v in itertools.product(range(f.order), repeat=n):
        lead = next((x for x in v if x), 0)
        if lead == 1:
            out.append(v)
    return out


def random_subspace(f: FieldSpec | int, n: int, dim: int, rng) -> Subspace:
    """Uniform-ish random subspace of the given dimension (random generators)."""
    f = _as_field(f)
    while True:
        gens = [[rng.randrange(f.order) for _ in range(n)] for _ in range(dim)]
        s = canonicalize(f, gens, n)
        if s.dim == dim:
            return s


def random_subspace_uniform(f: FieldSpec | int, n: int, rng) -> Subspace:
    """A subspace drawn uniformly from the whole lattice of F_q^n."""
    f = _as_field(f)
    weights = [gaussian_binomial(n, k, f.order) for k in range(n + 1)]
    k = rng.choices(range(n + 1), weights=weights)[0]
    return random_subspace(f, n, k, rng)


def subspace_from_json(d: dict, f: FieldSpec | None = None) -> Subspace:
    try:
        q, n, rows = int(d["q"]), int(d["n"]), d["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed subspace descriptor: {exc}") from None
    if f is None:
        f = field_of_order(q)
    elif f.order != q:
        raise DataError("subspace field order does not match")
    return canonicalize(f, rows, n)
