"""Explicit code families: the bundled examples, additive generalized twisted
Gabidulin codes, finite semifields and the codes built from them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from math import gcd
from typing import Sequence

from . import linalg
from .codes import RankMetricCode, additive_code
from .errors import DataError, FieldError
from .fields import (
    FieldSpec,
    FieldTower,
    field_make,
    find_root,
    frobenius_norm,
    norm_by_exponent,
    prime_power,
    subfield_elements,
    tower_make,
)

# ---------------------------------------------------------------------------
# bundled examples
# ---------------------------------------------------------------------------

# Basis of an 8-dimensional F_2-space of 3 x 4 binary matrices; row i holds the
# Pi-coordinates of codeword entry i.
EXAMPLE_3X4_BASIS = (
    ((1, 0, 0, 0), (0, 0, 0, 0), (0, 1, 1, 0)),
    ((0, 1, 0, 0), (0, 0, 0, 0), (0, 1, 1, 1)),
    ((0, 0, 1, 0), (0, 0, 0, 0), (1, 0, 0, 1)),
    ((0, 0, 0, 1), (0, 0, 0, 0), (1, 1, 0, 1)),
    ((0, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, 0)),
    ((0, 0, 0, 0), (0, 1, 0, 0), (0, 1, 0, 0)),
    ((0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 1, 0)),
    ((0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 1)),
)


def from_coordinate_matrix(tower: FieldTower, mat: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Inverse of the coordinate map: row i gives the Pi-coordinates of entry i."""
    return tuple(tower.from_packed(tower.pack(row)) for row in mat)


def example_3_4() -> RankMetricCode:
    """Strictly almost affine 2-dimensional code in F_16^3 (256 codewords)."""
    tower = tower_make(2, 1, 4)
    gens = [from_coordinate_matrix(tower, mat) for mat in EXAMPLE_3X4_BASIS]
    return additive_code(tower, gens, label="example_3_4")


def example_port_4() -> RankMetricCode:
    """F_4-row space of [[1, a, 0, 0], [0, 0, 1, a]] with a in F_4 outside F_2."""
    tower = tower_make(2, 1, 2)
    top = tower.top
    alpha = 2
    rows = [(1, alpha, 0, 0), (0, 0, 1, alpha)]
    gens = []
    for row in rows:
        for s in (1, alpha):
            gens.append(tuple(top.mul(s, x) for x in row))
    return additive_code(tower, gens, label="example_port_4")


BUNDLED = {"example_3_4": example_3_4, "example_port_4": example_port_4}


def bundled_examples(name: str) -> RankMetricCode:
    try:
        return BUNDLED[name]()
    except KeyError:
        raise DataError(f"unknown bundled example {name!r}; choose from {sorted(BUNDLED)}") from None


# ---------------------------------------------------------------------------
# additive generalized twisted Gabidulin codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearizedPolynomial:
    """sum_{i<k} a_i x^{q^{s i}} + eta * a_0^{q0^h} x^{q^{s k}} over F_{q^n}."""

    field: FieldSpec
    q: int
    coeffs: tuple[int, ...]
    eta: int
    s: int
    twist_exponent: int

    def __call__(self, x: int) -> int:
        f = self.field
        k = len(self.coeffs)
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = f.add(acc, f.mul(a, f.pow(x, self.q ** (self.s * i))))
        if self.eta and self.coeffs and self.coeffs[0]:
            twist = f.mul(self.eta, f.pow(self.coeffs[0], self.twist_exponent))
            acc = f.add(acc, f.mul(twist, f.pow(x, self.q ** (self.s * k))))
        return acc


@dataclass(frozen=True)
class AGTGParams:
    q0: int
    u: int
    n: int
    k: int
    s: int
    h: int
    eta: int


def _norm_target(p: int, n: int, k: int, u: int) -> int:
    """(-1)^{nku} as an element of F_p."""
    return 1 if (n * k * u) % 2 == 0 or p == 2 else p - 1


def agtg_norm(tower: FieldTower, q0: int, s: int, eta: int) -> int:
    """N_{F_{q^{sn}} / F_{q0^s}}(eta) with eta embedded from F_{q^n}.

    The big field is built over F_p; the conjugate-product and exponent forms
    are both evaluated and must agree.  The result is returned as an element
    of the big field, which lies in its prime field when the target equals
    +-1.
    """
    p, w = prime_power(q0)
    big = field_make(p, tower.top.e * s)
    if s == 1:
        image = eta
    else:
        small = tower.top
        root = find_root(big, small.modulus, subfield_elements(big, small.order))
        if root is None:  # pragma: no cover
            raise FieldError("no embedding of F_{q^n} into F_{q^{sn}}")
        image = 0
        power = 1
        for d in small.digits(eta):
            if d:
                image = big.add(image, big.scalar(d, power))
            power = big.mul(power, root)
    sub_order = q0 ** s
    a = frobenius_norm(big, image, sub_order)
    b = norm_by_exponent(big, image, sub_order)
    if a != b:  # pragma: no cover
        raise FieldError("norm forms disagree")
    return a


def agtg_default_eta(q0: int, u: int, n: int, k: int, s: int) -> int:
    """Smallest nonzero eta in F_{q^n} satisfying the norm condition."""
    p, w = prime_power(q0)
    tower = tower_make(p, w * u, n)
    target = _norm_target(p, n, k, u)
    for eta in range(1, tower.Q):
        if agtg_norm(tower, q0, s, eta) != target:
            return eta
    raise FieldError("no admissible eta exists")


def agtg_make(q0: int, u: int, n: int, k: int, s: int, h: int, eta: int | None = None) -> RankMetricCode:
    """Evaluate all twisted linearized polynomials on the Pi-basis of F_{q^n}.

    The result is an F_p-additive code in F_{q^n}^n with q^{nk} codewords.
    ``eta=None`` picks the default admissible twist; ``eta=0`` gives a
    generalized Gabidulin code.
    """
    p, w = prime_power(q0)
    if n < 1 or k < 1 or s < 1 or u < 1 or h < 0:
        raise DataError("parameters must be positive")
    if gcd(n, s) != 1:
        raise DataError("gcd(n, s) must be 1")
    if k >= n:
        raise DataError("k must be smaller than n")
    tower = tower_make(p, w * u, n)
    top = tower.top
    q = tower.q
    if eta is None:
        eta = agtg_default_eta(q0, u, n, k, s)
    if not 0 <= eta < top.order:
        raise DataError(f"eta must be an element of F_{top.order}")
    if eta:
        target = _norm_target(p, n, k, u)
        if agtg_norm(tower, q0, s, eta) == target:
            raise DataError("eta violates the norm condition")
    basis = tower.pi_basis
    twist = q0 ** h
    gens = []
    for i in range(k):
        for t in range(top.e):
            coeffs = [0] * k
            coeffs[i] = p ** t
            poly = LinearizedPolynomial(top, q, tuple(coeffs), eta, s, twist)
            gens.append(tuple(poly(g) for g in basis))
    label = f"agtg(q0={q0},u={u},n={n},k={k},s={s},h={h},eta={eta})"
    return additive_code(tower, gens, label=label)


def gabidulin_make(q: int, n: int, k: int, s: int = 1) -> RankMetricCode:
    """Generalized Gabidulin code: the untwisted case eta = 0."""
    return agtg_make(q, 1, n, k, s, 0, eta=0)


# ---------------------------------------------------------------------------
# semifields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemifieldTable:
    """An F_q-bilinear product on F_q^m given by left multiplications.

    ``mats[i]`` is the matrix L_{e_i}; then x o y = (sum_i x_i L_{e_i}) y.
    Elements are packed as sum c_j q^j.
    """

    q: int
    m: int
    mats: tuple[tuple[tuple[int, ...], ...], ...]
    identity: int
    proper_witness: tuple[int, int, int] | None = None

    def __post_init__(self):
        if len(self.mats) != self.m:
            raise DataError("need one structure matrix per basis vector")
        for mat in self.mats:
            if len(mat) != self.m or any(len(r) != self.m for r in mat):
                raise DataError("structure matrices must be m x m")
            for r in mat:
                for x in r:
                    if not 0 <= x < self.q:
                        raise DataError(f"{x} is not an element of F_{self.q}")
        if not 0 <= self.identity < self.order:
            raise DataError("identity is not an element")

    @property
    def field(self) -> FieldSpec:
        p, e = prime_power(self.q)
        return field_make(p, e)

    @property
    def order(self) -> int:
        return self.q ** self.m

    def unpack(self, x: int) -> list[int]:
        out = []
        for _ in range(self.m):
            x, d = divmod(x, self.q)
            out.append(d)
        return out

    def pack(self, coords: Sequence[int]) -> int:
        out = 0
        for c in reversed(coords):
            out = out * self.q + c
        return out

    def left_matrix(self, x: int) -> list[list[int]]:
        f = self.field
        out = [[0] * self.m for _ in range(self.m)]
        for xi, mat in zip(self.unpack(x), self.mats):
            if xi:
                for r in range(self.m):
                    for c in range(self.m):
                        if mat[r][c]:
                            out[r][c] = f.add(out[r][c], f.mul(xi, mat[r][c]))
        return out

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        f = self.field
        rows = []
        for x in range(self.order):
            lx = self.left_matrix(x)
            rows.append(tuple(self.pack(linalg.matvec(f, lx, self.unpack(y))) for y in range(self.order)))
        return tuple(rows)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def scale(self, lam: int, x: int) -> int:
        """Central scalar action of lam in F_q."""
        f = self.field
        return self.pack([f.mul(lam, c) for c in self.unpack(x)])

    def add(self, x: int, y: int) -> int:
        f = self.field
        return self.pack([f.add(a, b) for a, b in zip(self.unpack(x), self.unpack(y))])

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "left_mult": [[list(r) for r in mat] for mat in self.mats],
            "identity": self.identity,
            "proper_witness": None if self.proper_witness is None else list(self.proper_witness),
        }


def semifield_from_json(d: dict) -> SemifieldTable:
    try:
        w = d.get("proper_witness")
        return SemifieldTable(
            int(d["q"]), int(d["m"]),
            tuple(tuple(tuple(int(x) for x in r) for r in mat) for mat in d["left_mult"]),
            int(d["identity"]),
            None if w is None else tuple(int(x) for x in w),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed semifield descriptor: {exc}") from None


@dataclass(frozen=True)
class SemifieldCertificate:
    valid: bool
    identity_ok: bool
    zero_divisor_free: bool
    proper: bool
    witness: tuple[int, int, int] | None
    reason: str = ""

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["witness"] = None if self.witness is None else list(self.witness)
        return out


def associativity_witness(t: SemifieldTable) -> tuple[int, int, int] | None:
    """First triple (x, y, z) in increasing order with (xy)z != x(yz)."""
    tab = t.table
    N = t.order
    for x in range(1, N):
        rx = tab[x]
        for y in range(1, N):
            xy = rx[y]
            ry = tab[y]
            txy = tab[xy]
            for z in range(1, N):
                if txy[z] != rx[ry[z]]:
                    return (x, y, z)
    return None


def semifield_validate(t: SemifieldTable) -> SemifieldCertificate:
    """Check identity, absence of zero divisors and search for non-associativity.

    Bilinearity (hence distributivity) holds by the structure-constant
    representation.
    """
    tab = t.table
    N = t.order
    e = t.identity
    identity_ok = all(tab[e][y] == y and tab[y][e] == y for y in range(N))
    full = set(range(N))
    zdf = all(set(tab[x]) == full for x in range(1, N)) and all(
        {tab[x][y] for x in range(N)} == full for y in range(1, N)
    )
    if not identity_ok or not zdf:
        reason = "no two-sided identity" if not identity_ok else "zero divisors present"
        return SemifieldCertificate(False, identity_ok, zdf, False, None, reason)
    w = associativity_witness(t)
    if t.proper_witness is not None:
        x, y, z = t.proper_witness
        if tab[tab[x][y]][z] == tab[x][tab[y][z]]:
            return SemifieldCertificate(False, True, True, w is not None, w, "recorded witness associates")
    return SemifieldCertificate(True, True, True, w is not None, w, "proper" if w else "associative")


def _gf2_invertible_table(m: int) -> bytearray:
    """inv[M] for every m x m binary matrix packed column-major into m*m bits."""
    size = 1 << (m * m)
    mask = (1 << m) - 1
    out = bytearray(size)
    for mat in range(size):
        cols = [(mat >> (j * m)) & mask for j in range(m)]
        out[mat] = linalg.gf2_rank(cols) == m
    return out


def semifield_search(q: int, m: int, limit: int | None = None) -> SemifieldTable | None:
    """First proper semifield of order q^m in a deterministic backtracking order.

    Searches spread sets {L_x} normalised so that L_x e_1 = x (so L_{e_1} = I
    and e_1 is a two-sided identity).  Returns None when the search space holds
    no proper semifield.
    """
    p, e = prime_power(q)
    f = field_make(p, e)
    if m < 2:
        return None
    if q == 2:
        return _search_binary(m, limit)
    return _search_generic(f, m, limit)


def _mats_from_columns_binary(m: int, packed: Sequence[int]) -> tuple:
    mask = (1 << m) - 1
    out = []
    for mat in packed:
        cols = [(mat >> (j * m)) & mask for j in range(m)]
        out.append(tuple(tuple((cols[c] >> r) & 1 for c in range(m)) for r in range(m)))
    return tuple(out)


def _search_binary(m: int, limit: int | None) -> SemifieldTable | None:
    inv = _gf2_invertible_table(m)
    free_bits = m * (m - 1)
    identity = sum(1 << (j * m + j) for j in range(m))
    found = 0

    def rec(level: int, chosen: list[int], span: list[int]):
        nonlocal found
        if level == m:
            t = SemifieldTable(2, m, _mats_from_columns_binary(m, chosen), 1)
            w = associativity_witness(t)
            found += 1
            if w is not None:
                return SemifieldTable(2, m, t.mats, 1, w)
            if limit is not None and found >= limit:
                raise StopIteration
            return None
        first_col = 1 << level
        for free in range(1 << free_bits):
            cand = first_col | (free << m)
            if all(inv[s ^ cand] for s in span):
                res = rec(level + 1, chosen + [cand], span + [s ^ cand for s in span])
                if res is not None:
                    return res
        return None

    try:
        return rec(1, [identity], [0, identity])
    except StopIteration:
        return None


def _search_generic(f: FieldSpec, m: int, limit: int | None) -> SemifieldTable | None:
    q = f.order
    ident = tuple(tuple(int(r == c) for c in range(m)) for r in range(m))
    found = 0

    def mat_add(a, b):
        return tuple(tuple(f.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def mat_scale(s, a):
        return tuple(tuple(f.mul(s, x) for x in r) for r in a)

    def rec(level: int, chosen: list, span: list):
        nonlocal found
        if level == m:
            t = SemifieldTable(q, m, tuple(chosen), 1)
            w = associativity_witness(t)
            found += 1
            if w is not None:
                return SemifieldTable(q, m, t.mats, 1, w)
            if limit is not None and found >= limit:
                raise StopIteration
            return None
        slots = [(r, c) for c in range(1, m) for r in range(m)]
        for values in itertools.product(range(q), repeat=len(slots)):
            mat = [[0] * m for _ in range(m)]
            mat[level][0] = 1
            for (r, c), v in zip(slots, values):
                mat[r][c] = v
            cand = tuple(tuple(r) for r in mat)
            ok = True
            new_span = []
            for s in span:
                for lam in range(1, q):
                    combo = mat_add(s, mat_scale(lam, cand))
                    if not linalg.is_invertible(f, combo):
                        ok = False
                        break
                    new_span.append(combo)
                if not ok:
                    break
            if ok:
                res = rec(level + 1, chosen + [cand], span + new_span)
                if res is not None:
                    return res
        return None

    zero = tuple(tuple(0 for _ in range(m)) for _ in range(m))
    span0 = [zero] + [mat_scale(lam, ident) for lam in range(1, q)]
    try:
        return rec(1, [ident], span0)
    except StopIteration:
        return None


def load_semifield(name: str = "semifield_2_4") -> SemifieldTable:
    """Load a shipped semifield table and re-validate it."""
    try:
        text = resources.files("qrank.data").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise DataError(f"no shipped semifield named {name!r}") from None
    t = semifield_from_json(json.loads(text))
    cert = semifield_validate(t)
    if not cert.valid or not cert.proper:
        raise DataError(f"shipped semifield {name!r} failed validation: {cert.reason}")
    return t


def semifield_tower(t: SemifieldTable) -> FieldTower:
    p, e = prime_power(t.q)
    return tower_make(p, e, t.m)


def _require_proper(t: SemifieldTable) -> None:
    cert = semifield_validate(t)
    if not cert.valid:
        raise DataError(f"invalid semifield: {cert.reason}")
    if not cert.proper:
        raise DataError("semifield is associative; the construction needs a proper semifield")


def _f_p_basis(t: SemifieldTable) -> list[int]:
    """Packed elements forming an F_p-basis of the semifield."""
    p, e = prime_power(t.q)
    return [(p ** a) * t.q ** j for j in range(t.m) for a in range(e)]


def semifield_code_2dim(t: SemifieldTable) -> RankMetricCode:
    """C_S = {(x, (y - x o a)_{a in S})}, coordinates ordered infinity then a = 0, 1, ..."""
    _require_proper(t)
    tower = semifield_tower(t)
    top = tower.top
    N = t.order

    def word(x: int, y: int) -> tuple[int, ...]:
        fy = tower.from_packed(y)
        return (tower.from_packed(x),) + tuple(top.sub(fy, tower.from_packed(t.mul(x, a))) for a in range(N))

    basis = _f_p_basis(t)
    gens = [word(b, 0) for b in basis] + [word(0, b) for b in basis]
    return additive_code(tower, gens, label="semifield_code_2dim")


def witness_holds(t: SemifieldTable, point: Sequence[int]) -> bool:
    """Exist gamma, x and j with gamma o (x o p_j) != (gamma o x) o p_j."""
    tab = t.table
    N = t.order
    for pj in point:
        for g in range(N):
            for x in range(N):
                if tab[g][tab[x][pj]] != tab[tab[g][x]][pj]:
                    return True
    return False


def find_witness_point(t: SemifieldTable, k: int) -> tuple[int, ...]:
    """First point of S^{k-1} in lexicographic order satisfying the witness condition."""
    for point in itertools.product(range(t.order), repeat=k - 1):
        if witness_holds(t, point):
            return point
    raise DataError("no point satisfies the witness condition")


def semifield_code_kdim(t: SemifieldTable, k: int, point: Sequence[int] | None = None) -> RankMetricCode:
    """C_{S,k}(p): k-1 semifield slots, then one coordinate per lambda in F_q."""
    _require_proper(t)
    if k < 2:
        raise DataError("k must be at least 2")
    point = find_witness_point(t, k) if point is None else tuple(point)
    if len(point) != k - 1:
        raise DataError("point must have k-1 coordinates")
    if not witness_holds(t, point):
        raise DataError("point fails the witness condition")
    tower = semifield_tower(t)
    top = tower.top
    q = t.q

    def word(xs: Sequence[int], y: int) -> tuple[int, ...]:
        head = tuple(tower.from_packed(x) for x in xs)
        tail = []
        for lam in range(q):
            acc = y
            for xi, pi in zip(xs, point):
                acc = t.add(acc, t.scale(t.field.neg(1), t.mul(xi, t.scale(lam, pi))))
            tail.append(tower.from_packed(acc))
        return head + tuple(tail)

    basis = _f_p_basis(t)
    gens = []
    for i in range(k - 1):
        for b in basis:
            xs = [0] * (k - 1)
            xs[i] = b
            gens.append(word(xs, 0))
    for b in basis:
        gens.append(word([0] * (k - 1), b))
    return additive_code(tower, gens, label=f"semifield_code_kdim(k={k},p={list(point)})")

