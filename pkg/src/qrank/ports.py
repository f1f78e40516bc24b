"""Generalized q-matroid ports and vertical separations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property

from . import linalg
from .errors import BudgetExceeded, ConsistencyError, DataError
from .qmatroids import QMatroid
from .subspaces import (
    DEFAULT_BUDGET,
    Subspace,
    canonicalize,
    direct_complement,
    is_direct_complement,
    random_subspace,
    subspaces_within,
)

GAMMA = "gamma"
ADVERSARY = "A"
NEITHER = "neither"


@dataclass(frozen=True, eq=False)
class Port:
    m: QMatroid
    p0: Subspace
    p: Subspace

    def __post_init__(self):
        if not is_direct_complement(self.p0, self.p):
            raise DataError("P0 and P must be complementary")
        if self.m.rank(self.p0) == 0:
            raise DataError("the dealer space P0 must have positive rank")

    @cached_property
    def lattice(self) -> list[Subspace]:
        return subspaces_within(self.p)

    def classify(self, v: Subspace) -> str:
        if not v <= self.p:
            raise DataError("V must be a subspace of P")
        r = self.m.rank
        joint, rv = r(self.p0 + v), r(v)
        in_gamma = joint == rv
        in_adv = joint == r(self.p0) + rv
        if in_gamma and in_adv:
            raise ConsistencyError(f"{v!r} lies in both Gamma and A")
        return GAMMA if in_gamma else ADVERSARY if in_adv else NEITHER

    @cached_property
    def classes(self) -> dict[Subspace, str]:
        return {v: self.classify(v) for v in self.lattice}


def gamma_min(port: Port) -> list[Subspace]:
    """Inclusion-minimal members of Gamma."""
    gamma = [v for v, c in port.classes.items() if c == GAMMA]
    out = []
    for v in gamma:
        if not any(w.dim < v.dim and w <= v for w in gamma):
            out.append(v)
    return sorted(out, key=Subspace.sort_key)


@dataclass(frozen=True)
class PortVerdict:
    perfect: bool
    ideal: bool
    connected: bool
    gamma_min: tuple[Subspace, ...]

    def to_json(self) -> dict:
        return {
            "gamma_min": [[list(r) for r in v.rows] for v in self.gamma_min],
            "perfect": self.perfect,
            "ideal": self.ideal,
            "connected": self.connected,
        }


def port_predicates(port: Port) -> PortVerdict:
    classes = port.classes
    gmin = gamma_min(port)
    perfect = all(c != NEITHER for c in classes.values())
    lines = [v for v in port.lattice if v.dim == 1]
    ideal = all(port.m.rank(v) == 1 for v in lines)
    connected = all(any(v <= g for g in gmin) for v in lines)
    return PortVerdict(perfect, ideal, connected, tuple(gmin))


# ---------------------------------------------------------------------------
# separations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    a: Subspace
    b: Subspace
    t: int

    def to_json(self) -> dict:
        return {"a": [list(r) for r in self.a.rows], "b": [list(r) for r in self.b.rows], "t": self.t}


def is_vertical_separation(m: QMatroid, a: Subspace, b: Subspace, t: int) -> bool:
    if not is_direct_complement(a, b):
        return False
    ra, rb = m.rank(a), m.rank(b)
    return min(ra, rb) >= t and ra + rb - m.full_rank < t


def complements(a: Subspace) -> list[Subspace]:
    """Every direct complement of A: graphs of linear maps from a fixed complement into A."""
    f = a.field
    c = direct_complement(a)
    out = []
    count = f.order ** (a.dim * c.dim)
    if count > DEFAULT_BUDGET:
        raise BudgetExceeded(count, DEFAULT_BUDGET, "complements")
    for entries in itertools.product(range(f.order), repeat=a.dim * c.dim):
        rows = []
        for i, crow in enumerate(c.rows):
            coeffs = entries[i * a.dim:(i + 1) * a.dim]
            shift = linalg.matvec(f, linalg.transpose(a.rows), coeffs) if a.rows else [0] * a.n
            rows.append([f.add(x, y) for x, y in zip(crow, shift)])
        out.append(canonicalize(f, rows, a.n))
    return out


def vertical_separations(m: QMatroid, t: int, mode: str = "exhaustive", samples: int = 1000,
                         seed: int = 0, budget: int | None = DEFAULT_BUDGET) -> list[Separation]:
    """Complementary pairs (A, B), listed once with A before B in enumeration order."""
    if t < 1:
        raise DataError("t must be positive")
    if t > m.full_rank:
        return []
    found = {}
    if mode == "exhaustive":
        for a in m.subspaces(budget):
            if a.dim == 0 or a.dim == m.n or m.rank(a) < t:
                continue
            for b in complements(a):
                if a.sort_key() < b.sort_key() and is_vertical_separation(m, a, b, t):
                    found[(a, b)] = Separation(a, b, t)
    elif mode == "random":
        rng = random.Random(seed)
        for _ in range(samples):
            d = rng.randint(1, m.n - 1)
            a = random_subspace(m.field, m.n, d, rng)
            comps = complements(a)
            b = comps[rng.randrange(len(comps))]
            if b.sort_key() < a.sort_key():
                a, b = b, a
            if is_vertical_separation(m, a, b, t):
                found[(a, b)] = Separation(a, b, t)
    else:
        raise DataError(f"unknown separation mode {mode!r}")
    return [found[key] for key in sorted(found, key=lambda ab: (ab[0].sort_key(), ab[1].sort_key()))]


def connectivity(m: QMatroid, mode: str = "exhaustive", samples: int = 1000, seed: int = 0) -> int | None:
    """Smallest l admitting a vertical l-separation (the q-matroid is l-connected
    but not (l+1)-connected); None when no separation exists at all."""
    for t in range(1, m.full_rank + 1):
        if vertical_separations(m, t, mode, samples, seed):
            return t
    return None

