"""Finite fields F_{p^e}, field towers F_q <= F_{q^m}, Frobenius maps and norms.

Elements are integers: the residue sum(a_i x^i) is encoded as sum(a_i p^i).
This encoding is normative for every file format and ordering in the package.

Fields up to 2**20 elements use log/antilog tables (Zech logarithms for the
addition of odd-characteristic extension fields); larger fields fall back to
schoolbook polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import FieldError

TABLE_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# integers and polynomials over F_p
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**e; raises FieldError if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = fs[0]
    e = 0
    while q > 1:
        q //= p
        e += 1
    return p, e


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _ptrim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        f = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _ppowmod(a: list[int], k: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), m, p)
    while k:
        if k & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        k >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim([x % p for x in a]), _ptrim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = [c % p for c in modulus]
    e = len(f) - 1
    if e < 1 or f[-1] != 1:
        return False
    if e == 1:
        return True
    x = [0, 1]

    def x_pow_pk(k: int) -> list[int]:
        r = x
        for _ in range(k):
            r = _ppowmod(r, p, f, p)
        return r

    if _pmod(_psub(x_pow_pk(e), x, p), f, p):
        return False
    for r in prime_factors(e):
        g = _pgcd(f, _psub(x_pow_pk(e // r), x, p), p)
        if len(g) > 1:
            return False
    return True


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def int_to_digits(a: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        a, d = divmod(a, p)
        out.append(d)
    return out


def digits_to_int(digits: Iterable[int], p: int) -> int:
    out = 0
    mult = 1
    for d in digits:
        out += d * mult
        mult *= p
    return out


# ---------------------------------------------------------------------------
# single fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field F_p[x]/(modulus) of order p**e.

    ``modulus`` lists coefficients constant term first and is monic of
    degree e.  Tables are built lazily and cached on the instance.
    """

    p: int
    e: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.e < 1:
            raise FieldError("extension degree must be >= 1")
        if len(self.modulus) != self.e + 1 or self.modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree e")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {list(self.modulus)} is reducible over F_{self.p}")

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    @property
    def order(self) -> int:
        return self.p ** self.e

    @property
    def q(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def digits(self, a: int) -> list[int]:
        return int_to_digits(a, self.p, self.e)

    def from_digits(self, digits: Iterable[int]) -> int:
        return digits_to_int(digits, self.p)

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of {self!r}")
        return a

    # -- tables --------------------------------------------------------------

    @cached_property
    def _mod_int(self) -> int:
        return digits_to_int(self.modulus, self.p)

    def _mul_school(self, a: int, b: int) -> int:
        if self.p == 2:
            e, mod = self.e, self._mod_int
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if (a >> e) & 1:
                    a ^= mod
            return r
        if self.e == 1:
            return (a * b) % self.p
        prod = _pmulmod(self.digits(a), self.digits(b), self.modulus, self.p)
        return self.from_digits(prod)

    def _pow_school(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._mul_school(result, a)
            a = self._mul_school(a, a)
            k >>= 1
        return result

    @cached_property
    def primitive_element(self) -> int:
        """The multiplicative generator with the smallest encoding."""
        n = self.order - 1
        if n == 1:
            return 1
        fs = prime_factors(n)
        for g in range(2, self.order):
            if all(self._pow_school(g, n // r) != 1 for r in fs):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    @cached_property
    def _tables(self):
        """(exp, log, zech); exp has length 2(Q-1), log[0] = -1."""
        Q = self.order
        if Q > TABLE_LIMIT:
            return None
        n = Q - 1
        g = self.primitive_element
        exp = [0] * (2 * n)
        log = [-1] * Q
        step = self._times_constant(g)
        cur = 1
        for k in range(n):
            exp[k] = cur
            log[cur] = k
            cur = step(cur)
        exp[n:] = exp[:n]
        zech = None
        if self.p != 2 and self.e > 1:
            # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
            zech = [-1] * n
            p, e = self.p, self.e
            for k in range(n):
                d = int_to_digits(exp[k], p, e)
                d[0] = (d[0] + 1) % p
                s = digits_to_int(d, p)
                zech[k] = log[s] if s else -1
        return exp, log, zech

    def _times_constant(self, g: int):
        """Fast x -> g*x, linear over F_p."""
        p, e = self.p, self.e
        if e == 1:
            return lambda x: (x * g) % p
        if p == 2:
            chunks = []
            for lo in range(0, e, 8):
                width = min(8, e - lo)
                imgs = [self._mul_school(g, 1 << (lo + t)) for t in range(width)]
                table = [0] * (1 << width)
                for v in range(1, 1 << width):
                    low = v & -v
                    table[v] = table[v ^ low] ^ imgs[low.bit_length() - 1]
                chunks.append((lo, (1 << width) - 1, table))

            def step(x: int) -> int:
                r = 0
                for lo, mask, table in chunks:
                    r ^= table[(x >> lo) & mask]
                return r
            return step
        return lambda x: self._mul_school(g, x)

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        t = self._tables
        if t is None:
            p = self.p
            return digits_to_int(((x + y) % p for x, y in zip(self.digits(a), self.digits(b))), p)
        exp, log, zech = t
        la = log[a]
        z = zech[(log[b] - la) % (self.order - 1)]
        return 0 if z < 0 else exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        if self.e == 1:
            return self.p - a
        p = self.p
        return digits_to_int(((-x) % p for x in self.digits(a)), p)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.e == 1:
            return (a * b) % self.p
        t = self._tables
        if t is None:
            return self._mul_school(a, b)
        exp, log, _ = t
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise FieldError("zero has no multiplicative inverse")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        t = self._tables
        if t is None:
            return self._pow_school(a, self.order - 2)
        exp, log, _ = t
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if not a:
            if k < 0:
                raise FieldError("zero has no multiplicative inverse")
            return 1 if k == 0 else 0
        n = self.order - 1
        if self.e == 1:
            return pow(a, k % n, self.p)
        t = self._tables
        if t is None:
            return self._pow_school(a, k % n)
        exp, log, _ = t
        return exp[(log[a] * k) % n]

    def log(self, a: int) -> int:
        if not a:
            raise FieldError("log of zero")
        t = self._tables
        if t is None:
            raise FieldError("field too large for log tables")
        return t[1][a]

    def scalar(self, c: int, a: int) -> int:
        """Multiply by an integer c (an element of the prime field)."""
        return self.mul(c % self.p, a)

    # -- vectorised arithmetic ----------------------------------------------

    @cached_property
    def _np(self):
        t = self._tables
        if t is None:
            raise FieldError("vectorised arithmetic needs log tables")
        exp, log, zech = t
        dt = np.int16 if 2 * self.order < 1 << 15 else np.int32
        exp_np = np.asarray(exp + exp[:2], dtype=dt)
        log_np = np.asarray(log, dtype=dt)
        log_np[0] = 0
        zech_np = None if zech is None else np.asarray(zech, dtype=dt)
        return exp_np, log_np, zech_np

    def _as_ints(self, a) -> np.ndarray:
        arr = np.asarray(a)
        if arr.dtype.kind not in "iu":
            arr = arr.astype(np.int64)
        return arr

    def _product_dtype(self, a: np.ndarray, b: np.ndarray):
        """Smallest of the operand dtype, int32 and int64 that holds (p-1)^2."""
        dt = np.result_type(a, b)
        for cand in (dt, np.dtype(np.int32), np.dtype(np.int64)):
            if cand.itemsize >= dt.itemsize and np.iinfo(cand).max >= (self.p - 1) ** 2:
                return cand
        return np.dtype(np.int64)  # pragma: no cover

    def mul_array(self, a, b):
        """Elementwise product in the promoted integer dtype of the operands."""
        a, b = self._as_ints(a), self._as_ints(b)
        if self.e == 1:
            dt = self._product_dtype(a, b)
            prod = (a.astype(dt, copy=False) * b.astype(dt, copy=False)) % self.p
            return prod.astype(np.result_type(a, b), copy=False)
        exp_np, log_np, _ = self._np
        out = exp_np[log_np[a] + log_np[b]]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out.astype(np.result_type(a, b), copy=False)

    def add_array(self, a, b):
        a, b = self._as_ints(a), self._as_ints(b)
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            s = a + b
            np.subtract(s, self.p, out=s, where=s >= self.p)
            return s
        # a + b = a (1 + b/a) via Zech logarithms
        exp_np, log_np, zech_np = self._np
        la = log_np[a]
        z = zech_np[(log_np[b] - la) % (self.order - 1)]
        out = np.where(z < 0, 0, exp_np[la + np.maximum(z, 0)])
        out = np.where(a == 0, b, np.where(b == 0, a, out))
        return out.astype(np.result_type(a, b), copy=False)

    def scale_table(self, c: int):
        """Array t with t[x] = c*x for every element x."""
        return self.mul_array(np.full(self.order, c, dtype=np.int64), np.arange(self.order))


def axiom_sweep(f: FieldSpec) -> str | None:
    """Exhaustively check a+b=b+a, ab=ba, a(b+c)=ab+ac and a*inv(a)=1.

    Commutativity compares the full operation tables with their transposes.
    Distributivity is checked as a(b+g) = ab + ag for all a, b and every
    additive generator g = p^i; each c is a sum of generators, so induction
    on that sum gives the identity for all triples.  Returns the name of the
    first failing axiom, or None.
    """
    if f.order > TABLE_LIMIT:
        raise FieldError("exhaustive sweep needs log tables")
    q = f.order
    allv = np.arange(q, dtype=np.int16 if 2 * q < 1 << 15 else np.int32)
    add = f.add_array(allv[:, None], allv[None, :])
    if not np.array_equal(add, add.T):
        return "additive commutativity"
    mul = f.mul_array(allv[:, None], allv[None, :])
    if not np.array_equal(mul, mul.T):
        return "multiplicative commutativity"
    for i in range(f.e):
        g = f.p ** i
        lhs = mul[:, add[g]]
        rhs = f.add_array(mul, mul[:, g][:, None])
        if not np.array_equal(lhs, rhs):
            return "distributivity"
    for x in range(1, q):
        if f.mul(x, f.inv(x)) != 1:
            return "inverses"
    return None


@lru_cache(maxsize=None)
def _default_modulus(p: int, e: int) -> tuple[int, ...]:
    for enc in range(p ** e, 2 * p ** e):
        coeffs = tuple(int_to_digits(enc, p, e + 1))
        if is_irreducible(coeffs, p):
            return coeffs
    raise FieldError("no irreducible polynomial found")  # pragma: no cover


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, e, modulus)


def field_make(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build F_{p^e}.

    Without a modulus the monic irreducible of degree e with the smallest
    integer encoding is used, so the result is deterministic.
    """
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    if modulus is None:
        modulus = _default_modulus(p, e)
    return _cached_field(p, e, tuple(int(c) for c in modulus))


def field_of_order(q: int) -> FieldSpec:
    p, e = prime_power(q)
    return field_make(p, e)


def field_arith(f: FieldSpec, op: str, *operands: int) -> int:
    """Dispatch ``add|sub|mul|inv|pow|neg`` on element encodings."""
    for a in operands[:2] if op == "pow" else operands:
        if op != "pow" or a is operands[0]:
            f.check(a)
    if op == "add":
        return f.add(*operands)
    if op == "sub":
        return f.sub(*operands)
    if op == "mul":
        return f.mul(*operands)
    if op == "inv":
        return f.inv(*operands)
    if op == "neg":
        return f.neg(*operands)
    if op == "pow":
        return f.pow(*operands)
    raise FieldError(f"unknown operation {op!r}")


def frobenius(f: FieldSpec, x: int, d: int = 1) -> int:
    """x -> x^(p^d)."""
    return f.pow(x, f.p ** d)


def frobenius_norm(f: FieldSpec, x: int, sub_order: int) -> int:
    """Relative norm from f down to its subfield of order sub_order = p^d.

    Computed as the product of the e/d conjugates x^{(p^d)^i}.
    """
    sp, d = prime_power(sub_order)
    if sp != f.p or f.e % d:
        raise FieldError(f"F_{sub_order} is not a subfield of {f!r}")
    out = 1
    y = x
    for _ in range(f.e // d):
        out = f.mul(out, y)
        y = frobenius(f, y, d)
    return out


def norm_by_exponent(f: FieldSpec, x: int, sub_order: int) -> int:
    """Same norm as :func:`frobenius_norm`, via x^{(Q-1)/(p^d-1)}."""
    sp, d = prime_power(sub_order)
    if sp != f.p or f.e % d:
        raise FieldError(f"F_{sub_order} is not a subfield of {f!r}")
    return f.pow(x, (f.order - 1) // (sub_order - 1))


def subfield_elements(f: FieldSpec, sub_order: int) -> list[int]:
    """All elements of the unique subfield of the given order, sorted."""
    sp, d = prime_power(sub_order)
    if sp != f.p or f.e % d:
        raise FieldError(f"F_{sub_order} is not a subfield of {f!r}")
    if f.order <= TABLE_LIMIT:
        step = (f.order - 1) // (sub_order - 1)
        g = f.primitive_element
        return sorted([0] + [f.pow(g, step * k) for k in range(sub_order - 1)])
    return [x for x in f.elements() if f.pow(x, sub_order) == x]


def find_root(f: FieldSpec, poly: Sequence[int], candidates: Iterable[int]) -> int | None:
    """Smallest candidate that is a root of a polynomial with F_p coefficients."""
    for r in sorted(candidates):
        acc = 0
        for c in reversed(poly):
            acc = f.add(f.mul(acc, r), c)
        if acc == 0:
            return r
    return None


def field_to_json(f: FieldSpec) -> dict:
    return {"p": f.p, "e": f.e, "modulus": list(f.modulus)}


def field_from_json(d: dict) -> FieldSpec:
    return field_make(int(d["p"]), int(d["e"]), [int(c) for c in d["modulus"]])


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldTower:
    """F_p <= F_q <= F_{q^m} with a fixed F_q-basis pi_basis of F_{q^m}.

    ``top`` is realised directly over F_p with degree u*m; ``embed_root`` is
    the image of x (the generator of ``base`` over F_p) inside ``top``.
    """

    base: FieldSpec
    top: FieldSpec
    embed_root: int
    pi_basis: tuple[int, ...]

    def __post_init__(self):
        if self.base.p != self.top.p or self.top.e % self.base.e:
            raise FieldError("base is not a subfield of top")
        if len(self.pi_basis) != self.m:
            raise FieldError(f"pi_basis must have {self.m} elements")
        try:
            self._pi_inverse
        except ValueError:
            raise FieldError("pi_basis is not F_q-independent") from None

    def __repr__(self) -> str:
        return f"FieldTower(F_{self.q} <= F_{self.q}^{self.m})"

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def u(self) -> int:
        return self.base.e

    @property
    def m(self) -> int:
        return self.top.e // self.base.e

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def Q(self) -> int:
        return self.top.order

    @cached_property
    def embed(self) -> tuple[int, ...]:
        """embed[a] is the image of a in F_{q^m}."""
        top, r = self.top, self.embed_root
        powers = [1]
        for _ in range(1, self.u):
            powers.append(top.mul(powers[-1], r))
        out = []
        for a in range(self.q):
            acc = 0
            for d, pw in zip(self.base.digits(a), powers):
                if d:
                    acc = top.add(acc, top.scalar(d, pw))
            out.append(acc)
        return tuple(out)

    @cached_property
    def unembed(self) -> dict[int, int]:
        return {y: a for a, y in enumerate(self.embed)}

    @cached_property
    def _prime_basis(self) -> list[int]:
        """F_p-basis of F_{q^m}: embed(p^a) * pi_j at index a + u*j."""
        top = self.top
        return [top.mul(self.embed[self.p ** a], g) for g in self.pi_basis for a in range(self.u)]

    @cached_property
    def _pi_inverse(self) -> list[list[int]]:
        fp = field_make(self.p, 1)
        e = self.top.e
        # columns are the digit vectors of the F_p-basis
        cols = [self.top.digits(b) for b in self._prime_basis]
        T = [[cols[c][r] for c in range(e)] for r in range(e)]
        return linalg.inverse(fp, T)

    def to_packed(self, x: int) -> int:
        """Pi-coordinates of x packed as sum(c_j q^j)."""
        tab = self._packed_tables
        if tab is not None:
            return int(tab[0][x])
        fp = field_make(self.p, 1)
        return digits_to_int(linalg.matvec(fp, self._pi_inverse, self.top.digits(x)), self.p)

    def from_packed(self, s: int) -> int:
        tab = self._packed_tables
        if tab is not None:
            return int(tab[1][s])
        acc = 0
        for j, c in enumerate(self.unpack(s)):
            if c:
                acc = self.top.add(acc, self.top.mul(self.embed[c], self.pi_basis[j]))
        return acc

    def unpack(self, s: int) -> list[int]:
        return int_to_digits(s, self.q, self.m)

    def pack(self, coords: Sequence[int]) -> int:
        return digits_to_int(coords, self.q)

    def pi_coords(self, x: int) -> list[int]:
        """Coordinates of x in F_q with respect to pi_basis."""
        return self.unpack(self.to_packed(x))

    @cached_property
    def _packed_tables(self):
        if self.Q > TABLE_LIMIT:
            return None
        fp = field_make(self.p, 1)
        e, p = self.top.e, self.p
        to_imgs = []
        from_imgs = []
        for t in range(e):
            unit = [0] * e
            unit[t] = 1
            to_imgs.append(digits_to_int(linalg.matvec(fp, self._pi_inverse, unit), p))
            from_imgs.append(self._prime_basis[t])
        return _linear_table(self.top, to_imgs), _linear_table(self.top, from_imgs)

    def pairing(self, c: Sequence[int], v: Sequence[int]) -> int:
        """<c, v> = sum c_i * embed(v_i) for c over F_{q^m}, v over F_q."""
        top, emb = self.top, self.embed
        acc = 0
        for ci, vi in zip(c, v):
            if ci and vi:
                acc = top.add(acc, top.mul(ci, emb[vi]))
        return acc


def _linear_table(f: FieldSpec, images: list[int]) -> np.ndarray:
    """Table of the F_p-linear map sending p^t to images[t], for all elements."""
    arr = np.zeros(1, dtype=np.int64)
    for img in images:
        parts = [arr]
        cur = arr
        for _ in range(f.p - 1):
            cur = f.add_array(cur, img)
            parts.append(cur)
        arr = np.concatenate(parts)
    return arr


def _prime_rank(tower_top: FieldSpec, elems: Sequence[int]) -> int:
    return linalg.modp_rank(tower_top.p, [tower_top.digits(x) for x in elems])


@lru_cache(maxsize=None)
def tower_make(
    p: int,
    u: int,
    m: int,
    moduli: tuple[tuple[int, ...] | None, tuple[int, ...] | None] | None = None,
    pi_basis: tuple[int, ...] | None = None,
) -> FieldTower:
    """Build F_{p^u} <= F_{p^{um}} with a deterministic embedding and basis."""
    if u < 1 or m < 1:
        raise FieldError("u and m must be >= 1")
    base_mod, top_mod = moduli if moduli is not None else (None, None)
    base = field_make(p, u, base_mod)
    top = field_make(p, u * m, top_mod)
    if u == 1:
        root = find_root(top, base.modulus, range(p))
    else:
        root = find_root(top, base.modulus, subfield_elements(top, base.order))
    if root is None:  # pragma: no cover - impossible for valid fields
        raise FieldError("no embedding root found")
    probe = FieldTower.__new__(FieldTower)
    object.__setattr__(probe, "base", base)
    object.__setattr__(probe, "top", top)
    object.__setattr__(probe, "embed_root", root)
    emb = probe.embed

    def independent(elems: Sequence[int]) -> bool:
        span = [top.mul(emb[p ** a], g) for g in elems for a in range(u)]
        return _prime_rank(top, span) == len(span)

    if pi_basis is not None:
        pi = tuple(int(x) for x in pi_basis)
        if len(pi) != m or not independent(pi):
            raise FieldError("supplied pi_basis is not an F_q-basis")
    else:
        beta = p % top.order if top.e > 1 else _residue_of_x(top)
        pi = tuple(top.pow(beta, j) if beta else int(j == 0) for j in range(m))
        if not independent(pi):
            chosen: list[int] = []
            for x in range(1, top.order):
                if independent(chosen + [x]):
                    chosen.append(x)
                    if len(chosen) == m:
                        break
            pi = tuple(chosen)
    return FieldTower(base, top, root, pi)


def _residue_of_x(f: FieldSpec) -> int:
    # degree-1 field: x = -modulus[0]
    return (-f.modulus[0]) % f.p


def tower_to_json(t: FieldTower) -> dict:
    return {
        "base": field_to_json(t.base),
        "top": field_to_json(t.top),
        "embed_root": t.embed_root,
        "pi_basis": list(t.pi_basis),
    }


def tower_from_json(d: dict) -> FieldTower:
    base = field_from_json(d["base"])
    top = field_from_json(d["top"])
    if base.p != top.p or top.e % base.e:
        raise FieldError("tower descriptor: base is not a subfield of top")
    t = tower_make(base.p, base.e, top.e // base.e, (base.modulus, top.modulus), tuple(d["pi_basis"]))
    if t.embed_root != int(d["embed_root"]):
        # a different (valid) root was recorded; honour it
        root = int(d["embed_root"])
        acc = 0
        for c in reversed(base.modulus):
            acc = top.add(top.mul(acc, root), c)
        if acc:
            raise FieldError("embed_root is not a root of the base modulus")
        t = FieldTower(base, top, root, tuple(int(x) for x in d["pi_basis"]))
    return t
