"""Distributions determined by a q-matroid: rank counts, rank-weight
distributions, the MacWilliams system for the formal dual distance, generalized
weights, minimal codewords and dual circuits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .codes import (
    RankMetricCode,
    batch_rank_weights,
    code_support,
    induced_qmatroid,
    projection_image_size,
    relative_support,
    subcode,
)
from .errors import BudgetExceeded, ConsistencyError, DataError
from .qmatroids import QMatroid, circuits, dual
from .subspaces import DEFAULT_BUDGET, Subspace, gaussian_binomial


@dataclass(frozen=True)
class RankCountTable:
    """entries[v][u] = number of subspaces of dimension v and rank u."""

    n: int
    q: int
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, vu: tuple[int, int]) -> int:
        v, u = vu
        return self.entries[v][u]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def rank_counts(m: QMatroid, budget: int | None = DEFAULT_BUDGET) -> RankCountTable:
    n = m.n
    counts = [[0] * (n + 1) for _ in range(n + 1)]
    for v in m.subspaces(budget):
        counts[v.dim][m.rank(v)] += 1
    for v in range(n + 1):
        if sum(counts[v]) != gaussian_binomial(n, v, m.q):  # pragma: no cover
            raise ConsistencyError("rank counts do not partition the lattice")
    return RankCountTable(n, m.q, tuple(tuple(r) for r in counts))


@dataclass(frozen=True)
class WeightDistribution:
    A: tuple[int, ...]
    anchor: tuple[int, ...] | None = None

    @property
    def nonneg(self) -> bool:
        return all(a >= 0 for a in self.A)

    @property
    def total(self) -> int:
        return sum(self.A)


@dataclass(frozen=True)
class DualDistanceDistribution:
    B: tuple[Fraction, ...]

    @property
    def integral(self) -> bool:
        return all(b.denominator == 1 for b in self.B)

    @property
    def nonneg(self) -> bool:
        return all(b >= 0 for b in self.B)

    def as_json(self) -> list:
        return [int(b) if b.denominator == 1 else str(b) for b in self.B]


def _qpow(q: int, e: int) -> Fraction | int:
    return q ** e if e >= 0 else Fraction(1, q ** -e)


def counting_sums(R: RankCountTable, k: int, mdeg: int) -> list:
    """S_i = sum_u q^{m(k-u)} R^u_{n-i}: pairs (c, V) with dim V = i and supp_x(c) <= V."""
    n, q = R.n, R.q
    return [sum(_qpow(q, mdeg * (k - u)) * R.entries[n - i][u] for u in range(n + 1)) for i in range(n + 1)]


def qbinomial_forward(A: Sequence, n: int, q: int) -> list:
    """S_i = sum_j [n-j, n-i]_q A_j for i = 0..n."""
    return [sum(gaussian_binomial(n - j, n - i, q) * A[j] for j in range(n + 1)) for i in range(n + 1)]


def qbinomial_inverse(S: Sequence, n: int, q: int) -> list:
    """Invert qbinomial_forward.

    The coefficient [n-j, n-i]_q = [n-j, i-j]_q vanishes unless j <= i, so
    Gaussian inversion gives
    A_j = sum_{i<=j} (-1)^{j-i} q^{C(j-i,2)} [n-i, j-i]_q S_i.
    """
    A = []
    for j in range(n + 1):
        total = 0
        for i in range(j + 1):
            sign = -1 if (j - i) % 2 else 1
            total += sign * q ** comb(j - i, 2) * gaussian_binomial(n - i, j - i, q) * S[i]
        A.append(total)
    return A


def formula_from_counts(R: RankCountTable, k: int, mdeg: int) -> tuple[int, ...]:
    """Rank-weight distribution from the rank counts: invert sum_j [n-j, n-i]_q A_j = S_i."""
    out = []
    for a in qbinomial_inverse(counting_sums(R, k, mdeg), R.n, R.q):
        if isinstance(a, Fraction):
            if a.denominator != 1:  # pragma: no cover
                raise ConsistencyError("weight formula produced a non-integer")
            a = a.numerator
        out.append(int(a))
    return tuple(out)


def weight_distribution_formula(m: QMatroid, mdeg: int, budget: int | None = DEFAULT_BUDGET) -> WeightDistribution:
    """Rank-weight distribution determined by the q-matroid alone."""
    R = rank_counts(m, budget)
    return WeightDistribution(formula_from_counts(R, m.full_rank, mdeg))


def _differences(code: RankMetricCode, x: Sequence[int]) -> np.ndarray:
    arr = code.array()
    top = code.tower.top
    xs = np.asarray(x, dtype=np.int64)
    if code.tower.p == 2:
        return arr ^ xs
    neg = np.array([top.neg(int(v)) for v in xs], dtype=np.int64)
    return np.stack([top.add_array(arr[:, i], int(neg[i])) for i in range(code.n)], axis=1)


def weight_distribution_bruteforce(code: RankMetricCode, x: Sequence[int] | None = None,
                                   budget: int = 1 << 22) -> WeightDistribution:
    """Histogram of rank(c - x) over c in C."""
    if code.size > budget:
        raise BudgetExceeded(code.size, budget, "codewords")
    x = code.anchor() if x is None else tuple(x)
    if not code.contains(x):
        raise DataError("anchor is not a codeword")
    w = batch_rank_weights(code.tower, _differences(code, x))
    hist = np.bincount(w, minlength=code.n + 1)
    return WeightDistribution(tuple(int(h) for h in hist), x)


def full_space_distribution(n: int, q: int, mdeg: int) -> tuple[int, ...]:
    """Number of n x m matrices over F_q of each rank."""
    out = []
    for j in range(n + 1):
        prod = 1
        for i in range(j):
            prod *= q ** mdeg - q ** i
        out.append(gaussian_binomial(n, j, q) * prod)
    return tuple(out)


def macwilliams_solve(A: Sequence[int], k: int, mdeg: int, n: int, q: int) -> DualDistanceDistribution:
    """Solve sum_j [n-j,n-i] A_j = q^{m(k+i-n)} sum_j [n-j,i] B_j by back-substitution.

    Equation i involves B_j only for j <= n-i, with coefficient 1 on B_{n-i},
    so running i from n down to 0 determines B_0, B_1, ... in turn.
    """
    if len(A) != n + 1:
        raise DataError("A must have n+1 entries")
    B: list[Fraction] = []
    for i in range(n, -1, -1):
        lhs = sum(gaussian_binomial(n - j, n - i, q) * A[j] for j in range(n + 1))
        rhs = Fraction(lhs) / _qpow(q, mdeg * (k + i - n))
        known = sum(gaussian_binomial(n - j, i, q) * B[j] for j in range(len(B)))
        B.append(rhs - known)
    return DualDistanceDistribution(tuple(Fraction(b) for b in B))


def macwilliams_forward(B: Sequence, k: int, mdeg: int, n: int, q: int) -> tuple[Fraction, ...]:
    """A from B via the same system, solved for A by forward substitution.

    Equation i involves A_j only for j <= i with coefficient 1 on A_i.
    """
    A: list[Fraction] = []
    for i in range(n + 1):
        rhs = _qpow(q, mdeg * (k + i - n)) * sum(gaussian_binomial(n - j, i, q) * Fraction(B[j]) for j in range(n + 1))
        known = sum(gaussian_binomial(n - j, n - i, q) * A[j] for j in range(len(A)))
        A.append(Fraction(rhs) - known)
    return tuple(A)


def macwilliams(a: WeightDistribution | Sequence[int], k: int, mdeg: int, n: int, q: int,
                path: str = "solve", m: QMatroid | None = None,
                budget: int | None = DEFAULT_BUDGET) -> DualDistanceDistribution:
    """Formal dual distance distribution, by solving the system or via R*."""
    A = a.A if isinstance(a, WeightDistribution) else tuple(a)
    if path == "solve":
        return macwilliams_solve(A, k, mdeg, n, q)
    if path == "dual_formula":
        if m is None:
            raise DataError("the dual-formula path needs the q-matroid")
        Rs = rank_counts(dual(m), budget)
        B = formula_from_counts(Rs, n - k, mdeg)
        return DualDistanceDistribution(tuple(Fraction(b) for b in B))
    raise DataError(f"unknown MacWilliams path {path!r}")


# ---------------------------------------------------------------------------
# generalized weights
# ---------------------------------------------------------------------------

GW_PATHS = ("dual_nullity", "rank_drop", "flat_size")


def _gw_path(m: QMatroid, path: str, code: RankMetricCode | None, budget) -> tuple[int, ...]:
    n, k = m.n, m.full_rank
    subs = m.subspaces(budget)
    out = []
    if path == "dual_nullity":
        md = dual(m)
        for i in range(1, k + 1):
            out.append(min(v.dim for v in subs if md.rank(v) == v.dim - i))
    elif path == "rank_drop":
        for i in range(1, k + 1):
            out.append(n - max(v.dim for v in subs if m.rank(v) == k - i))
    elif path == "flat_size":
        if code is None:
            raise DataError("the flat-size path needs the code")
        Q = code.Q
        fibre = {v: code.size // projection_image_size(code, v) for v in subs}
        for i in range(1, k + 1):
            out.append(n - max(v.dim for v in subs if fibre[v] == Q ** i))
    else:
        raise DataError(f"unknown generalized-weight path {path!r}")
    return tuple(out)


def generalized_weights(m: QMatroid, path: str | None = None, code: RankMetricCode | None = None,
                        budget: int | None = DEFAULT_BUDGET) -> tuple[int, ...]:
    """d_1 <= ... <= d_k.  With path=None every available path is computed and
    they must agree."""
    if path is not None:
        return _gw_path(m, path, code, budget)
    paths = [p for p in GW_PATHS if p != "flat_size" or code is not None]
    results = {p: _gw_path(m, p, code, budget) for p in paths}
    first = results[paths[0]]
    if any(r != first for r in results.values()):
        raise ConsistencyError(f"generalized weight characterizations disagree: {results}")
    return first


def subcode_support_weights(code: RankMetricCode, x: Sequence[int] | None = None,
                            budget: int | None = DEFAULT_BUDGET) -> tuple[int, ...]:
    """e_i = min dim supp D over the flats D = C(V, x) with dim D = i."""
    m = induced_qmatroid(code)
    k = m.full_rank
    x = code.anchor() if x is None else tuple(x)
    best = [None] * (k + 1)
    for v in m.subspaces(budget):
        i = k - m.rank(v)
        if i == 0:
            continue
        d = code_support(subcode(code, v, x), x).dim
        if best[i] is None or d < best[i]:
            best[i] = d
    return tuple(best[1:])


# ---------------------------------------------------------------------------
# minimal codewords and dual circuits
# ---------------------------------------------------------------------------

def minimal_codewords(code: RankMetricCode, x: Sequence[int] | None = None) -> list[tuple[tuple[int, ...], Subspace]]:
    """Codewords c != x whose relative support contains no other properly."""
    x = code.anchor() if x is None else tuple(x)
    if not code.contains(x):
        raise DataError("anchor is not a codeword")
    tower = code.tower
    supports = [(c, relative_support(tower, c, x)) for c in code.codewords() if c != x]
    distinct = sorted({s for _, s in supports}, key=Subspace.sort_key)
    minimal = set()
    for s in distinct:
        if not any(t.dim < s.dim and t <= s for t in distinct):
            minimal.add(s)
    return [(c, s) for c, s in supports if s in minimal]


def minimal_supports(code: RankMetricCode, x: Sequence[int] | None = None) -> list[Subspace]:
    return sorted({s for _, s in minimal_codewords(code, x)}, key=Subspace.sort_key)


def dual_circuits(m: QMatroid, budget: int | None = DEFAULT_BUDGET) -> list[Subspace]:
    return circuits(dual(m), budget=budget)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def distribution_report(code: RankMetricCode, budget: int | None = DEFAULT_BUDGET) -> dict:
    m = induced_qmatroid(code)
    k = m.full_rank
    n, q, mdeg = code.n, code.q, code.m
    A = weight_distribution_formula(m, mdeg, budget)
    brute = weight_distribution_bruteforce(code)
    B = macwilliams(A, k, mdeg, n, q, "solve")
    B2 = macwilliams(A, k, mdeg, n, q, "dual_formula", m=m, budget=budget)
    return {
        "A": list(A.A),
        "A_bruteforce": list(brute.A),
        "formula_matches": A.A == brute.A,
        "B": B.as_json(),
        "B_paths_agree": B.B == B2.B,
        "R": rank_counts(m, budget).to_json(),
        "Rstar": rank_counts(dual(m), budget).to_json(),
        "d": list(generalized_weights(m, code=code, budget=budget)) if k else [],
        "nonneg": A.nonneg and B.nonneg,
        "integral": B.integral,
    }

