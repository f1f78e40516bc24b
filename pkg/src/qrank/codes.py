"""Rank-metric codes in F_{q^m}^n: supports, projections, almost-affinity,
induced q-matroids, puncturing, shortening and equivalences.

A code is stored either explicitly (a sorted tuple of distinct codewords) or
additively as offset + F_p-span(generators).  Projection sizes use hashing
in the first case and F_p-rank computations in the second.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .errors import BudgetExceeded, DataError, NotAlmostAffine
from .fields import TABLE_LIMIT, FieldTower, field_make, tower_from_json, tower_to_json
from .qmatroids import QMatroid
from .subspaces import (
    DEFAULT_BUDGET,
    Subspace,
    canonicalize,
    count_subspaces,
    direct_complement,
    enumerate_subspaces,
    gaussian_binomial,
    is_direct_complement,
    random_subspace,
    random_subspace_uniform,
    zero_space,
)

Word = tuple[int, ...]


def log_exact(x: int, base: int) -> int | None:
    """k with base**k == x, or None."""
    if x < 1:
        return None
    k = 0
    while x > 1:
        if x % base:
            return None
        x //= base
        k += 1
    return k


# ---------------------------------------------------------------------------
# single vectors
# ---------------------------------------------------------------------------

def coordinate_matrix(tower: FieldTower, v: Sequence[int]) -> list[list[int]]:
    """n x m matrix over F_q whose row i is the Pi-expansion of v_i."""
    return [tower.pi_coords(x) for x in v]


def support(tower: FieldTower, v: Sequence[int]) -> Subspace:
    """Column space of the coordinate matrix, a subspace of F_q^n."""
    mat = coordinate_matrix(tower, v)
    n = len(v)
    cols = [[mat[i][j] for i in range(n)] for j in range(tower.m)]
    return canonicalize(tower.base, cols, n)


def rank_weight(tower: FieldTower, v: Sequence[int]) -> int:
    """dim_{F_q} of the F_q-span of the entries of v (the row rank of Pi(v)).

    Computed through F_p-ranks so that it does not depend on Pi at all.
    """
    top, p, u = tower.top, tower.p, tower.u
    scalars = [tower.embed[p ** a] for a in range(u)]
    vecs = [top.mul(s, x) for x in v if x for s in scalars]
    if p == 2:
        return linalg.gf2_rank(vecs) // u
    return linalg.modp_rank(p, [top.digits(x) for x in vecs]) // u


def vector_sub(tower: FieldTower, a: Sequence[int], b: Sequence[int]) -> Word:
    top = tower.top
    return tuple(top.sub(x, y) for x, y in zip(a, b))


def vector_add(tower: FieldTower, a: Sequence[int], b: Sequence[int]) -> Word:
    top = tower.top
    return tuple(top.add(x, y) for x, y in zip(a, b))


def relative_support(tower: FieldTower, c: Sequence[int], x: Sequence[int]) -> Subspace:
    """supp_x(c) = supp(c - x)."""
    return support(tower, vector_sub(tower, c, x))


def evaluate(tower: FieldTower, rows: Sequence[Sequence[int]], word: Sequence[int]) -> Word:
    """G * word for a matrix G over F_q (rows) and a word over F_{q^m}."""
    return tuple(tower.pairing(word, r) for r in rows)


def batch_rank_weights(tower: FieldTower, arr: np.ndarray) -> np.ndarray:
    """Rank weights of every row of an (N, n) array of words."""
    arr = np.asarray(arr, dtype=np.int64)
    if arr.ndim != 2:
        raise DataError("expected a 2-d array of words")
    N, n = arr.shape
    if N == 0:
        return np.zeros(0, dtype=np.int64)
    top, p, u = tower.top, tower.p, tower.u
    if p != 2 or top.order > TABLE_LIMIT:
        return np.array([rank_weight(tower, row) for row in arr.tolist()], dtype=np.int64)
    E = top.e
    basis = np.zeros((N, E), dtype=np.int64)
    rank = np.zeros(N, dtype=np.int64)
    for a in range(u):
        s = tower.embed[p ** a]
        for i in range(n):
            v = top.mul_array(arr[:, i], s) if s != 1 else arr[:, i].copy()
            for b in range(E - 1, -1, -1):
                has = ((v >> b) & 1).astype(bool)
                if not has.any():
                    continue
                slot = basis[:, b]
                empty = has & (slot == 0)
                reduce = has & (slot != 0)
                basis[empty, b] = v[empty]
                rank += empty
                v = np.where(empty, 0, v)
                v = np.where(reduce, v ^ slot, v)
    return rank // u


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RankMetricCode:
    tower: FieldTower
    n: int
    storage: str
    words: tuple[Word, ...] = ()
    generators: tuple[Word, ...] = ()
    offset: Word = ()
    label: str = dc_field(default="", compare=False)

    def __repr__(self) -> str:
        return f"RankMetricCode({self.storage}, n={self.n}, |C|={self.size}, {self.tower!r})"

    # -- basic facts --------------------------------------------------------

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def m(self) -> int:
        return self.tower.m

    @property
    def Q(self) -> int:
        return self.tower.Q

    @property
    def is_additive(self) -> bool:
        return self.storage == "additive"

    @cached_property
    def size(self) -> int:
        if self.is_additive:
            return self.tower.p ** len(self.generators)
        return len(self.words)

    @cached_property
    def dimension(self) -> Fraction | float:
        """log_{q^m}|C|: a Fraction when |C| is a power of p, else a float."""
        e = log_exact(self.size, self.tower.p)
        if e is not None:
            return Fraction(e, self.tower.top.e)
        return math.log(self.size, self.Q)

    @property
    def integral_dimension(self) -> bool:
        d = self.dimension
        return isinstance(d, Fraction) and d.denominator == 1

    @property
    def k(self) -> int:
        if not self.integral_dimension:
            raise NotAlmostAffine(f"|C| = {self.size} is not a power of {self.Q}")
        return int(self.dimension)

    # -- element access -----------------------------------------------------

    def codewords(self) -> Iterator[Word]:
        if not self.is_additive:
            yield from self.words
            return
        if self.tower.Q <= TABLE_LIMIT:
            for row in self.array().tolist():
                yield tuple(row)
            return
        yield from self._python_words()

    def _python_words(self) -> Iterator[Word]:
        words = [self.offset]
        for g in self.generators:
            nxt = list(words)
            cur = words
            for _ in range(self.tower.p - 1):
                cur = [vector_add(self.tower, w, g) for w in cur]
                nxt.extend(cur)
            words = nxt
        yield from words

    def array(self) -> np.ndarray:
        """All codewords as an (N, n) int64 array (additive order: sum a_j p^j)."""
        return self._array

    @cached_property
    def _array(self) -> np.ndarray:
        if not self.is_additive:
            return np.array(self.words, dtype=np.int64).reshape(len(self.words), self.n)
        top = self.tower.top
        arr = np.array([self.offset], dtype=np.int64).reshape(1, self.n)
        for g in self.generators:
            gv = np.array(g, dtype=np.int64)
            parts = [arr]
            cur = arr
            for _ in range(self.tower.p - 1):
                cur = top.add_array(cur, gv)
                parts.append(cur)
            arr = np.concatenate(parts)
        arr.setflags(write=False)
        return arr

    def word_at(self, index: int) -> Word:
        if not self.is_additive:
            return self.words[index]
        w = self.offset
        p = self.tower.p
        for g in self.generators:
            index, a = divmod(index, p)
            for _ in range(a):
                w = vector_add(self.tower, w, g)
        return w

    @cached_property
    def _word_set(self) -> frozenset:
        return frozenset(self.words)

    @cached_property
    def _span_basis(self):
        """Echelon data for the F_p-span of the generators (additive storage)."""
        vecs = [_fp_vector(self.tower, g) for g in self.generators]
        if self.tower.p == 2:
            basis: dict[int, int] = {}
            for v in vecs:
                linalg.xor_basis_insert(basis, v)
            return basis
        return vecs

    def contains(self, word: Sequence[int]) -> bool:
        word = tuple(word)
        if len(word) != self.n:
            return False
        if not self.is_additive:
            return word in self._word_set
        diff = _fp_vector(self.tower, vector_sub(self.tower, word, self.offset))
        if self.tower.p == 2:
            return linalg.xor_reduce(self._span_basis, diff) == 0
        base = self._span_basis
        return linalg.modp_rank(self.tower.p, base + [diff]) == linalg.modp_rank(self.tower.p, base)

    def __contains__(self, word) -> bool:
        return self.contains(word)

    def anchor(self) -> Word:
        """Default anchor codeword: the one with the smallest encoding tuple."""
        if not self.is_additive:
            return self.words[0]
        if self.tower.Q <= TABLE_LIMIT:
            arr = self.array()
            order = np.lexsort(arr.T[::-1])
            return tuple(int(x) for x in arr[order[0]])
        return min(self._python_words())

    # -- per-generator evaluation tables --------------------------------------

    @cached_property
    def _mulcol(self) -> list[list[list[int]]]:
        """_mulcol[j][i][a] = embed(a) * g_j[i]."""
        top, emb = self.tower.top, self.tower.embed
        return [[[top.mul(emb[a], x) for a in range(self.q)] for x in g] for g in self.generators]

    def _generator_images(self, rows: Sequence[Sequence[int]]) -> list[Word]:
        top = self.tower.top
        out = []
        for cols in self._mulcol:
            img = []
            for r in rows:
                acc = 0
                for i, a in enumerate(r):
                    if a:
                        acc = top.add(acc, cols[i][a])
                img.append(acc)
            out.append(tuple(img))
        return out


def _fp_vector(tower: FieldTower, word: Sequence[int]):
    """F_p-coordinates of a word: a packed int for p = 2, digit list otherwise."""
    if tower.p == 2:
        E = tower.top.e
        out = 0
        for i, x in enumerate(word):
            out |= x << (i * E)
        return out
    return [d for x in word for d in tower.top.digits(x)]


def _fp_rank(tower: FieldTower, vectors) -> int:
    if tower.p == 2:
        return linalg.gf2_rank(vectors)
    return linalg.modp_rank(tower.p, vectors)


def _check_word(tower: FieldTower, w: Sequence[int], n: int) -> Word:
    w = tuple(int(x) for x in w)
    if len(w) != n:
        raise DataError(f"codeword length {len(w)} differs from n = {n}")
    for x in w:
        if not 0 <= x < tower.Q:
            raise DataError(f"{x} is not an element of F_{tower.Q}")
    return w


def explicit_code(tower: FieldTower, words: Iterable[Sequence[int]], n: int | None = None,
                  label: str = "") -> RankMetricCode:
    words = list(words)
    if n is None:
        if not words:
            raise DataError("an empty code needs an explicit length")
        n = len(words[0])
    clean = sorted({_check_word(tower, w, n) for w in words})
    if not clean:
        raise DataError("a code must contain at least one codeword")
    return RankMetricCode(tower, n, "explicit", words=tuple(clean), label=label)


def additive_code(tower: FieldTower, generators: Iterable[Sequence[int]], offset: Sequence[int] | None = None,
                  n: int | None = None, label: str = "") -> RankMetricCode:
    """offset + F_p-span(generators); dependent generators are dropped."""
    gens = list(generators)
    if n is None:
        if gens:
            n = len(gens[0])
        elif offset is not None:
            n = len(offset)
        else:
            raise DataError("an additive code needs a length")
    gens = [_check_word(tower, g, n) for g in gens]
    off = _check_word(tower, offset, n) if offset is not None else (0,) * n
    kept = []
    if tower.p == 2:
        basis: dict[int, int] = {}
        for g in gens:
            if linalg.xor_basis_insert(basis, _fp_vector(tower, g)):
                kept.append(g)
    else:
        cur: list = []
        r = 0
        for g in gens:
            cand = cur + [_fp_vector(tower, g)]
            if linalg.modp_rank(tower.p, cand) > r:
                cur = cand
                r += 1
                kept.append(g)
    return RankMetricCode(tower, n, "additive", generators=tuple(kept), offset=off, label=label)


def as_explicit(code: RankMetricCode) -> RankMetricCode:
    if not code.is_additive:
        return code
    return explicit_code(code.tower, code.codewords(), code.n, code.label)


# ---------------------------------------------------------------------------
# projections and almost-affinity
# ---------------------------------------------------------------------------

def projection_image_size(code: RankMetricCode, v: Subspace) -> int:
    """|pi_V(C)|, the number of distinct values G_V c over c in C."""
    if v.n != code.n or v.q != code.q:
        raise DataError("subspace does not live in F_q^n of this code")
    if v.dim == 0:
        return 1
    tower = code.tower
    if code.is_additive:
        imgs = code._generator_images(v.rows)
        return tower.p ** _fp_rank(tower, [_fp_vector(tower, w) for w in imgs])
    return len({evaluate(tower, v.rows, w) for w in code.words})


def code_rank(code: RankMetricCode, v: Subspace) -> int:
    """rho_C(V) = log_{q^m}|pi_V(C)|; raises NotAlmostAffine if not integral."""
    size = projection_image_size(code, v)
    r = log_exact(size, code.Q)
    if r is None:
        raise NotAlmostAffine(f"|pi_V(C)| = {size} is not a power of {code.Q} for V = {v!r}")
    return r


@dataclass
class AAVerdict:
    almost_affine: bool | None
    scope: str
    exhaustive: bool
    partial: bool
    checked: int
    sizes: dict[int, int]
    first_violation: Subspace | None = None
    violation_size: int | None = None

    def to_json(self) -> dict:
        return {
            "almost_affine": self.almost_affine,
            "scope": self.scope,
            "exhaustive": self.exhaustive,
            "partial": self.partial,
            "checked": self.checked,
            "projection_sizes": {str(k): v for k, v in sorted(self.sizes.items())},
            "first_violation": None if self.first_violation is None else self.first_violation.to_json(),
            "violation_size": self.violation_size,
        }


def parse_scope(scope: str) -> tuple[str, int | None]:
    if scope == "all":
        return "all", None
    for key in ("dims", "sample"):
        if scope.startswith(key + "="):
            try:
                val = int(scope.split("=", 1)[1])
            except ValueError:
                break
            if val < 0:
                break
            return key, val
    raise DataError(f"bad scope {scope!r}; expected all, dims=D or sample=N")


def scope_subspaces(field, n: int, scope: str, seed: int = 0,
                    budget: int | None = DEFAULT_BUDGET) -> tuple[Iterable[Subspace], bool, bool]:
    """(subspaces, exhaustive, partial) for a scope descriptor."""
    kind, val = parse_scope(scope)
    q = field.order
    if kind == "sample":
        rng = random.Random(seed)
        return [random_subspace_uniform(field, n, rng) for _ in range(val)], False, False
    top = n if kind == "all" else min(val, n)
    dims = []
    total = 0
    partial = False
    for d in range(top + 1):
        c = gaussian_binomial(n, d, q)
        if budget is not None and total + c > budget:
            partial = True
            break
        dims.append(d)
        total += c
    if kind == "dims" and partial:
        raise BudgetExceeded(sum(gaussian_binomial(n, d, q) for d in range(top + 1)), budget)
    return enumerate_subspaces(field, n, dims, None), not partial and kind == "all", partial


def check_projection_sizes(code: RankMetricCode, subspaces: Iterable[Subspace], scope: str = "custom",
                           exhaustive: bool = False, partial: bool = False) -> AAVerdict:
    sizes: dict[int, int] = {}
    checked = 0
    for v in subspaces:
        checked += 1
        s = projection_image_size(code, v)
        sizes[s] = sizes.get(s, 0) + 1
        if log_exact(s, code.Q) is None:
            return AAVerdict(False, scope, exhaustive, partial, checked, sizes, v, s)
    return AAVerdict(None if partial else True, scope, exhaustive, partial, checked, sizes)


def is_almost_affine(code: RankMetricCode, scope: str = "all", seed: int = 0,
                     budget: int | None = DEFAULT_BUDGET) -> AAVerdict:
    """Check that every inspected projection size is a power of q^m.

    In ``all`` mode a lattice larger than the budget is covered dimension by
    dimension until the budget is spent and the verdict is marked partial.
    """
    subs, exhaustive, partial = scope_subspaces(code.tower.base, code.n, scope, seed, budget)
    return check_projection_sizes(code, subs, scope, exhaustive, partial)


def induced_qmatroid(code: RankMetricCode, verify: bool = False,
                     budget: int | None = DEFAULT_BUDGET) -> QMatroid:
    """M_C with rho_C(V) = log_{q^m}|pi_V(C)|, evaluated lazily."""
    if verify:
        verdict = is_almost_affine(code, "all", budget=budget)
        if verdict.almost_affine is False:
            raise NotAlmostAffine(f"projection size {verdict.violation_size} at {verdict.first_violation!r}")
    return QMatroid(code.tower.base, code.n, lambda v: code_rank(code, v), origin="code")


# ---------------------------------------------------------------------------
# derived codes
# ---------------------------------------------------------------------------

def puncture(code: RankMetricCode, z: Subspace) -> RankMetricCode:
    """C_Z = {G_Z c : c in C}, a code of length dim Z."""
    tower = code.tower
    if z.n != code.n:
        raise DataError("subspace does not live in F_q^n of this code")
    if code.is_additive:
        gens = [evaluate(tower, z.rows, g) for g in code.generators]
        return additive_code(tower, gens, evaluate(tower, z.rows, code.offset), n=z.dim)
    return explicit_code(tower, (evaluate(tower, z.rows, w) for w in code.words), n=z.dim)


def subcode(code: RankMetricCode, z: Subspace, x: Sequence[int] | None = None) -> RankMetricCode:
    """C(Z, x) = {c in C : pi_Z(c) = pi_Z(x)}."""
    tower = code.tower
    x = code.anchor() if x is None else tuple(x)
    if not code.contains(x):
        raise DataError("anchor is not a codeword")
    if z.n != code.n:
        raise DataError("subspace does not live in F_q^n of this code")
    if not code.is_additive:
        target = evaluate(tower, z.rows, x)
        return explicit_code(tower, (w for w in code.words if evaluate(tower, z.rows, w) == target), n=code.n)
    if not z.rows or not code.generators:
        return additive_code(tower, code.generators, x, n=code.n)
    p = tower.p
    fp = field_make(p, 1)
    imgs = code._generator_images(z.rows)
    cols = [[d for y in img for d in tower.top.digits(y)] for img in imgs]
    matrix = linalg.transpose(cols)
    kernel = linalg.nullspace(fp, matrix, len(imgs))
    gens = []
    for coeffs in kernel:
        w = (0,) * code.n
        for a, g in zip(coeffs, code.generators):
            for _ in range(a):
                w = vector_add(tower, w, g)
        gens.append(w)
    return additive_code(tower, gens, x, n=code.n)


def shorten(code: RankMetricCode, z: Subspace, x: Sequence[int] | None = None,
            complement: Subspace | None = None) -> RankMetricCode:
    """C(Z, x) punctured on a direct complement of Z."""
    comp = direct_complement(z) if complement is None else complement
    if not is_direct_complement(z, comp):
        raise DataError("complement is not a direct complement of Z")
    return puncture(subcode(code, z, x), comp)


def _apply_matrix(tower: FieldTower, a: Sequence[Sequence[int]], w: Sequence[int]) -> Word:
    top, emb = tower.top, tower.embed
    out = []
    for row in a:
        acc = 0
        for aij, x in zip(row, w):
            if aij and x:
                acc = top.add(acc, top.mul(emb[aij], x))
        out.append(acc)
    return tuple(out)


def apply_equivalence(code: RankMetricCode, a: Sequence[Sequence[int]],
                      t: Sequence[int] | None = None) -> RankMetricCode:
    """The code {A x + t : x in C}."""
    tower, n = code.tower, code.n
    if len(a) != n or any(len(r) != n for r in a):
        raise DataError("equivalence matrix has the wrong shape")
    if not linalg.is_invertible(tower.base, a):
        raise DataError("equivalence matrix is singular")
    t = (0,) * n if t is None else _check_word(tower, t, n)
    if code.is_additive:
        gens = [_apply_matrix(tower, a, g) for g in code.generators]
        return additive_code(tower, gens, vector_add(tower, _apply_matrix(tower, a, code.offset), t), n=n)
    return explicit_code(tower, (vector_add(tower, _apply_matrix(tower, a, w), t) for w in code.words), n=n)


def equivalence_transport_matrix(field, a: Sequence[Sequence[int]]) -> list[list[int]]:
    """phi = (A^{-1})^T, the q-matroid isomorphism induced by x -> A x + t."""
    return linalg.transpose(linalg.inverse(field, a))


# ---------------------------------------------------------------------------
# linearity and distance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearityReport:
    contains_zero: bool
    p_linear: bool
    q_linear: bool
    qm_linear: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _closed_under(code: RankMetricCode, basis_words: Sequence[Word], scalar: int) -> bool:
    top = code.tower.top
    return all(code.contains(tuple(top.mul(scalar, x) for x in w)) for w in basis_words)


def classify_linearity(code: RankMetricCode) -> LinearityReport:
    tower = code.tower
    zero = (0,) * code.n
    contains_zero = code.contains(zero)
    if code.is_additive:
        p_linear = contains_zero
        basis_words = list(code.generators)
    else:
        basis_words = []
        vecs = []
        for w in code.words:
            cand = vecs + [_fp_vector(tower, w)]
            if _fp_rank(tower, cand) > len(vecs):
                vecs = cand
                basis_words.append(w)
        p_linear = contains_zero and tower.p ** len(basis_words) == code.size
    if not p_linear:
        return LinearityReport(contains_zero, False, False, False)
    q_linear = tower.u == 1 or _closed_under(code, basis_words, tower.embed_root)
    qm_linear = q_linear and (tower.top.e == 1 or _closed_under(code, basis_words, tower.p))
    return LinearityReport(contains_zero, True, q_linear, qm_linear)


def min_distance(code: RankMetricCode) -> int:
    """Minimum rank distance between distinct codewords."""
    if code.size < 2:
        raise DataError("minimum distance needs at least two codewords")
    tower = code.tower
    if code.is_additive:
        diffs = additive_code(tower, code.generators, None, n=code.n)
        if tower.Q <= TABLE_LIMIT:
            w = batch_rank_weights(tower, diffs.array()[1:])
            return int(w.min())
        return min(rank_weight(tower, d) for d in list(diffs._python_words())[1:])
    if tower.Q <= TABLE_LIMIT:
        arr = code.array()
        best = code.n
        top = tower.top
        for i in range(len(arr) - 1):
            d = top.add_array(arr[i + 1:], top.mul_array(arr[i], top.neg(1)) if tower.p != 2 else arr[i])
            best = min(best, int(batch_rank_weights(tower, d).min()))
            if best == 1:
                break
        return best
    words = code.words
    return min(rank_weight(tower, vector_sub(tower, a, b)) for i, a in enumerate(words) for b in words[i + 1:])


def code_support(code: RankMetricCode, x: Sequence[int] | None = None) -> Subspace:
    """supp_x(C), the sum of supp(c - x) over c in C."""
    x = code.anchor() if x is None else tuple(x)
    tower = code.tower
    if code.is_additive:
        gens = []
        for g in code.generators:
            gens.extend(support(tower, g).rows)
        gens.extend(support(tower, vector_sub(tower, code.offset, x)).rows)
        return canonicalize(tower.base, gens, code.n)
    gens = []
    for w in code.words:
        gens.extend(relative_support(tower, w, x).rows)
    return canonicalize(tower.base, gens, code.n)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def code_to_json(code: RankMetricCode) -> dict:
    out = {"tower": tower_to_json(code.tower), "n": code.n, "storage": code.storage}
    if code.is_additive:
        out["generators"] = [list(g) for g in code.generators]
        out["offset"] = list(code.offset)
    else:
        out["codewords"] = [list(w) for w in code.words]
    return out


def code_from_json(d: dict) -> RankMetricCode:
    if not isinstance(d, dict):
        raise DataError("code descriptor must be a JSON object")
    try:
        tower = tower_from_json(d["tower"])
        n = int(d["n"])
        storage = d.get("storage", "explicit")
        if storage == "explicit":
            return explicit_code(tower, d["codewords"], n)
        if storage == "additive":
            return additive_code(tower, d["generators"], d.get("offset"), n)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed code descriptor: {exc}") from None
    raise DataError(f"unknown storage {storage!r}")

