"""Dense linear algebra over a finite field given by element encodings.

Every routine takes the field as its first argument and works on plain lists
of integer encodings, so the same code serves the small base field F_q (for
subspaces) and the large top field F_{q^m} (for codeword systems).  The field
object needs ``add``, ``sub``, ``mul``, ``neg`` and ``inv``.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def rref(field, rows: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with zero rows dropped.

    Returns ``(rows, pivots)`` where ``pivots[r]`` is the pivot column of row r.
    """
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    add, mul, inv, neg = field.add, field.mul, field.inv, field.neg
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        if prow[c] != 1:
            s = inv(prow[c])
            prow = [mul(s, x) for x in prow]
            mat[r] = prow
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = neg(mat[i][c])
                row = mat[i]
                mat[i] = [add(x, mul(f, y)) if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(field, rows: Sequence[Sequence[int]]) -> int:
    return len(rref(field, rows)[1])


def nullspace(field, rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of {x : M x = 0}, one basis vector per free column."""
    red, pivots = rref(field, rows)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, pc in enumerate(pivots):
            if red[r][free]:
                v[pc] = field.neg(red[r][free])
        basis.append(v)
    return basis


def matmul(field, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    add, mul = field.add, field.mul
    cols = list(zip(*b)) if b else []
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add(acc, mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(field, a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    add, mul = field.add, field.mul
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = add(acc, mul(x, y))
        out.append(acc)
    return out


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(c) for c in zip(*a)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def inverse(field, a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a square matrix; raises ValueError if singular."""
    n = len(a)
    aug = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    red, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def is_invertible(field, a: Sequence[Sequence[int]]) -> bool:
    return len(a) == len(a[0]) and rank(field, a) == len(a) if a else True


def solve(field, a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """One solution of a x = b, or None if inconsistent."""
    if not a:
        return None if any(b) else []
    ncols = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(field, aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


# ---------------------------------------------------------------------------
# F_p vectors packed into Python integers
# ---------------------------------------------------------------------------

def xor_basis_insert(basis: dict[int, int], v: int) -> bool:
    """Insert a GF(2) bit-vector into an echelon basis keyed by leading bit.

    Returns True if the rank grew.
    """
    while v:
        top = v.bit_length() - 1
        b = basis.get(top)
        if b is None:
            basis[top] = v
            return True
        v ^= b
    return False


def xor_reduce(basis: dict[int, int], v: int) -> int:
    while v:
        top = v.bit_length() - 1
        b = basis.get(top)
        if b is None:
            return v
        v ^= b
    return 0


def gf2_rank(vectors) -> int:
    basis: dict[int, int] = {}
    r = 0
    for v in vectors:
        if xor_basis_insert(basis, v):
            r += 1
    return r


def modp_rank(p: int, vectors: Sequence[Sequence[int]]) -> int:
    """Rank of integer vectors modulo a prime p."""
    if p == 2:
        return gf2_rank(sum(bit << i for i, bit in enumerate(v) if bit) for v in vectors)
    basis: dict[int, list[int]] = {}
    r = 0
    for v in vectors:
        v = [x % p for x in v]
        while True:
            lead = next((i for i, x in enumerate(v) if x), None)
            if lead is None:
                break
            b = basis.get(lead)
            if b is None:
                s = pow(v[lead], p - 2, p)
                basis[lead] = [(x * s) % p for x in v]
                r += 1
                break
            f = v[lead]
            v = [(x - f * y) % p for x, y in zip(v, b)]
    return r
