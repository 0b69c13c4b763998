"""The group generated by the columns of a bijective substitution."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, gcd, lcm

from .errors import SubstitutionError
from .substitution import (
    ColumnMap,
    Substitution,
    column,
    columns,
    power_column,
    substitution_power,
)

Perm = tuple[int, ...]


def identity_perm(c: int) -> Perm:
    return tuple(range(c))


def compose(p: Perm, q: Perm) -> Perm:
    """p after q: (p . q)(a) = p(q(a))."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_order(p: Perm) -> int:
    ident = identity_perm(len(p))
    q = p
    order = 1
    while q != ident:
        q = compose(q, p)
        order += 1
    return order


def cycle_notation(p: Perm, names=None) -> str:
    """Disjoint cycles over letter names; fixed points omitted, identity is 'id'."""
    names = names or [str(i) for i in range(len(p))]
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            cycle.append(x)
            seen[x] = True
            x = p[x]
        parts.append("(" + " ".join(names[i] for i in cycle) + ")")
    return "".join(parts) if parts else "id"


@dataclass(frozen=True)
class ColumnGroup:
    elements: frozenset[Perm]
    generators: tuple[Perm, ...]
    order: int
    exponent: int
    abelian: bool
    transitive: bool

    @property
    def is_cyclic(self) -> bool:
        return self.abelian and self.exponent == self.order

    def __post_init__(self):
        for g in self.elements:
            if self.exponent % perm_order(g):
                raise SubstitutionError("group exponent does not kill every element")


def generate_group(sub: Substitution) -> ColumnGroup:
    """Closure of the column maps under composition, with cached structure."""
    cols = columns(sub)
    for i, col in enumerate(cols):
        if not col.is_bijective:
            raise SubstitutionError(f"column {i} is not a bijection ({col.kind})")
    c = sub.size
    gens = tuple(dict.fromkeys(col.image for col in cols))
    cap = factorial(c)
    ident = identity_perm(c)
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = compose(g, s)
                if h not in elements:
                    elements.add(h)
                    nxt.append(h)
                    if len(elements) > cap:
                        raise SubstitutionError("group closure exceeded c! elements")
        frontier = nxt

    exponent = 1
    for g in elements:
        exponent = lcm(exponent, perm_order(g))
    abelian = all(compose(a, b) == compose(b, a) for a in gens for b in gens)
    orbit = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                if s[x] not in orbit:
                    orbit.add(s[x])
                    nxt.append(s[x])
        frontier = nxt
    return ColumnGroup(frozenset(elements), gens, len(elements), exponent, abelian,
                       len(orbit) == c)


@dataclass(frozen=True)
class PalindromicityReport:
    g_witness: Perm | None
    inverse_palindromic: bool


def palindromicity(sub: Substitution) -> PalindromicityReport:
    """Check whether every column composed with its mirror column is one fixed map."""
    cols = columns(sub)
    for i, col in enumerate(cols):
        if not col.is_bijective:
            raise SubstitutionError(f"column {i} is not a bijection ({col.kind})")
    L = sub.length
    candidate = compose(cols[0].image, cols[L - 1].image)
    for i in range(L):
        if compose(cols[i].image, cols[L - 1 - i].image) != candidate:
            return PalindromicityReport(None, False)
    return PalindromicityReport(candidate, candidate == identity_perm(sub.size))


@dataclass(frozen=True)
class WitnessReport:
    positions: tuple[int, ...]
    difference: int
    power: int       # power of the input substitution whose zeroth column is id
    levels: int      # rounds of that power realizing the identity columns
    base_length: int


def identity_column_witness(sub: Substitution, k: int) -> WitnessReport:
    """Positions of identity columns spaced in arithmetic progression.

    Works on the smallest power of the substitution whose zeroth column is the
    identity; each claimed position is re-checked through power_column.
    """
    if k < 1:
        raise SubstitutionError("k must be >= 1")
    col0 = column(sub, 0)
    if not col0.is_bijective:
        raise SubstitutionError("column 0 is not a bijection")
    p = perm_order(col0.image)
    base = sub if p == 1 else substitution_power(sub, p)
    group = generate_group(base)
    e = group.exponent
    Lb = base.length
    d = (Lb ** (k * e) - 1) // (Lb**k - 1)
    ident = identity_perm(base.size)
    positions = []
    for m in range(Lb**k):
        pos = m * d
        if power_column(base, pos, k * e).image != ident:
            raise SubstitutionError(
                f"internal error: column {pos} of level {k * e} is not the identity"
            )
        positions.append(pos)
    return WitnessReport(tuple(positions), d, p, k * e, Lb)
