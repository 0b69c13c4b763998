"""Arbitrary-precision van der Waerden-type bound calculators."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .errors import SubstitutionError

FACTOR_CAP = 2**63


def ceil_log(base: int, value: int) -> int:
    """Least k >= 0 with base**k >= value, by integer comparison only."""
    if base < 2 or value < 1:
        raise SubstitutionError("ceil_log needs base >= 2 and value >= 1")
    k = 0
    power = 1
    while power < value:
        power *= base
        k += 1
    return k


def pair_cover_bound(c: int) -> int:
    return c**4 - 2 * c**2 + 3


def formula_r(c: int, L: int) -> int:
    return 2 * L ** pair_cover_bound(c) - L


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, primes ascending."""
    if not 2 <= n < FACTOR_CAP:
        raise SubstitutionError(f"factorization supported for 2 <= n < {FACTOR_CAP}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def min_prime_power(L: int) -> tuple[int, int, int]:
    """The smallest maximal prime-power factor q = p**a of L, with (q, p, a)."""
    best = None
    for p, a in factorize(L):
        q = p**a
        if best is None or q < best[0]:
            best = (q, p, a)
    return best


def ceil_growth_exponent(L: int) -> tuple[int, int]:
    """ceil(log L / log q) for q the smallest maximal prime-power factor of L.

    Returned as (ceiling, q); the ceiling is the least t with q**t >= L.
    """
    q, _, _ = min_prime_power(L)
    return ceil_log(q, L), q


@dataclass(frozen=True)
class VdwQuery:
    c: int
    L: int
    M: int
    r_override: int | None = None
    exponent_override: int | None = None

    def __post_init__(self):
        if self.c < 2 or self.L < 2 or self.M < 1:
            raise SubstitutionError("need c >= 2, L >= 2, M >= 1")
        for v in (self.r_override, self.exponent_override):
            if v is not None and v < 1:
                raise SubstitutionError("overrides must be positive")


def vdw_upper(q: VdwQuery) -> int:
    """(R+1) * L**(k*E) with k = ceil(log_L M)."""
    return vdw_upper_report(q)["value"]


def vdw_upper_report(q: VdwQuery) -> dict:
    k = ceil_log(q.L, q.M)
    R = q.r_override if q.r_override is not None else formula_r(q.c, q.L)
    E = q.exponent_override if q.exponent_override is not None else factorial(q.c)
    value = (R + 1) * q.L ** (k * E)
    return {
        "c": q.c,
        "L": q.L,
        "M": q.M,
        "k": k,
        "R": R,
        "E": E,
        "value": value,
    }


@dataclass(frozen=True)
class VdwLowerResult:
    progression_length: int
    window_length: int
    n0: int
    ceil_b: int
    prime_power: int


def vdw_lower(c: int, L: int, m: int) -> VdwLowerResult:
    """A progression length M' and window n' with W(class, M') > n'.

    M' = L**(N0+1) * m**ceil(B) + 1 and n' = L**(N0+1) * m**(ceil(B)+1) + 1,
    where B compares L against its smallest maximal prime-power factor.
    """
    if c < 2 or m < 2 or L < 2:
        raise SubstitutionError("need c > 1, m > 1, L >= 2")
    n0 = pair_cover_bound(c)
    ceil_b, q = ceil_growth_exponent(L)
    base = L ** (n0 + 1)
    return VdwLowerResult(base * m**ceil_b + 1, base * m ** (ceil_b + 1) + 1, n0, ceil_b, q)
