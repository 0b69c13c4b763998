"""Maximum monochromatic arithmetic progressions at fixed difference.

Scans prefixes of (coded) substitution fixed points, certifies exactness when
a recurrence-complete window covers a theoretical upper bound, and generates
the predicted difference families together with their verification harness.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import ResourceCapError, SubstitutionError
from .groups import generate_group, identity_perm, palindromicity
from .spin import SpinSystem, hadamard4, rudin_shapiro, vandermonde
from .stream import Coding, FixedPointSpec, prefix
from .substitution import (
    Substitution,
    column,
    is_bijective,
    is_primitive,
    min_pair_cover_power,
    recurrence_formula,
    aperiodicity_certificate,
)
from .vdw import min_prime_power

EXACT = "ExactUnderBound"
LOWER = "LowerBoundOnly"


@dataclass(frozen=True)
class APResult:
    d: int
    best_len: int
    best_start: int
    prefix_len: int
    status: str


@dataclass(frozen=True)
class ScanPolicy:
    initial_prefix: int = 2**20
    prefix_cap: int = 2**26
    r_override: int | None = None


def max_ap_in_prefix(word, d: int) -> APResult:
    """Exact maximum progression inside a finite word, leftmost start on ties.

    Per residue class mod d the word splits into strided slices whose runs of
    equal consecutive letters are the progressions; linear in the word length.
    """
    if d < 1:
        raise SubstitutionError("difference must be >= 1")
    w = np.asarray(word)
    n = len(w)
    if n == 0:
        raise SubstitutionError("word must be non-empty")
    best_len, best_start = 1, 0
    if d >= n:
        return APResult(d, best_len, best_start, n, LOWER)
    eq = w[:-d] == w[d:]
    for r in range(d):
        a = eq[r::d]
        if not a.any():
            continue
        edges = np.flatnonzero(np.diff(np.concatenate(([False], a, [False]))))
        starts, ends = edges[0::2], edges[1::2]
        lengths = ends - starts
        i = int(lengths.argmax())
        cand_len = int(lengths[i]) + 1
        cand_start = r + d * int(starts[i])
        if cand_len > best_len or (cand_len == best_len and cand_start < best_start):
            best_len, best_start = cand_len, cand_start
    return APResult(d, best_len, best_start, n, LOWER)


def max_ap_oracle(word, d: int) -> tuple[int, int]:
    """Plain double-loop reference: extend from every run start."""
    n = len(word)
    best_len, best_start = 1, 0
    for s in range(n):
        if s >= d and word[s - d] == word[s]:
            continue
        length = 1
        j = s + d
        while j < n and word[j] == word[s]:
            length += 1
            j += d
        if length > best_len:
            best_len, best_start = length, s
    return best_len, best_start


class PrefixSource:
    """Grow-once cache of a (coded) fixed-point prefix shared across scans."""

    def __init__(self, fp: FixedPointSpec, coding: Coding | None = None,
                 cap: int = 2**30):
        self.fp = fp
        self.coding = coding
        self.cap = cap
        self._arr: np.ndarray | None = None
        self._lock = threading.Lock()

    def get(self, n: int) -> np.ndarray:
        with self._lock:
            if self._arr is None or len(self._arr) < n:
                self._arr = prefix(self.fp, n, self.coding, cap=self.cap)
            return self._arr[:n]


@lru_cache(maxsize=None)
def _certification_basis(sub: Substitution) -> tuple[bool, int | None]:
    """Whether the upper-bound route applies to this substitution, plus its N."""
    if not is_bijective(sub) or not is_primitive(sub):
        return False, None
    if column(sub, 0).image != identity_perm(sub.size):
        return False, None
    group = generate_group(sub)
    if not group.abelian:
        return False, None
    if aperiodicity_certificate(sub, detector_prefix=2**12).status != "AperiodicByCriterion":
        return False, None
    return True, min_pair_cover_power(sub)


def upper_bound(sub: Substitution, d: int, n_value: int | None = None) -> int | None:
    """Smallest applicable theoretical bound on the progression length at d.

    Route one uses the minimal window exponent M with d <= L**M when the gcd
    of d with L**M is already stable at L**(N+M). Route two moves M up until
    the smallest maximal prime-power factor of L outgrows d, which forces the
    same stability. None when the substitution is outside the bijective
    Abelian setting.
    """
    if d < 1:
        raise SubstitutionError("difference must be >= 1")
    ok, n_exact = _certification_basis(sub)
    if not ok:
        return None
    N = n_value if n_value is not None else n_exact
    L = sub.length
    candidates = []

    M = 1
    while L**M < d:
        M += 1
    ell = gcd(d, L**M)
    if gcd(d, L ** (N + M)) == ell:
        candidates.append(L ** (N + M) // ell)

    q, _, _ = min_prime_power(L)
    M2 = 1
    while q**M2 <= d:
        M2 += 1
    ell2 = gcd(d, L**M2)
    if gcd(d, L ** (N + M2)) != ell2:
        raise SubstitutionError("prime-power window failed to stabilize the gcd")
    candidates.append(L ** (N + M2) // ell2)
    return min(candidates)


def _certified_window(sub: Substitution, coding: Coding | None, d: int,
                      r_override: int | None) -> int | None:
    """Prefix length that makes a scan at difference d provably exhaustive."""
    if coding is not None and not coding.is_injective:
        return None
    ok, n_exact = _certification_basis(sub)
    if not ok:
        return None
    bound = upper_bound(sub, d, n_value=n_exact)
    if bound is None:
        return None
    R = r_override if r_override is not None else recurrence_formula(sub.size, sub.length)[0]
    return (R + 1) * (d * bound + 1)


def a_of_d(fp: FixedPointSpec, coding: Coding | None, d: int,
           policy: ScanPolicy = ScanPolicy(), *, hint_lower: int | None = None,
           source: PrefixSource | None = None) -> APResult:
    """Scan a growing prefix until the best length is stable across a doubling.

    Status is ExactUnderBound only when the substitution admits an upper bound
    and the final window is recurrence-complete for it; plateaus alone never
    certify anything.
    """
    if d < 1:
        raise SubstitutionError("difference must be >= 1")
    if 2 * d + 1 > policy.prefix_cap:
        raise ResourceCapError(
            f"difference {d} does not fit two terms inside the cap {policy.prefix_cap}"
        )
    src = source if source is not None else PrefixSource(fp, coding)
    target = None
    if fp.power == 1:
        target = _certified_window(fp.sub, coding, d, policy.r_override)
    window = policy.initial_prefix
    if hint_lower:
        window = max(window, 64 * d * hint_lower)
    if target is not None and target <= policy.prefix_cap:
        window = max(window, target)
    window = min(window, policy.prefix_cap)
    best = max_ap_in_prefix(src.get(window), d)
    while window < policy.prefix_cap:
        window = min(2 * window, policy.prefix_cap)
        nxt = max_ap_in_prefix(src.get(window), d)
        stable = nxt.best_len == best.best_len
        best = nxt
        if stable:
            break
    if target is not None and best.prefix_len >= target:
        best = replace(best, status=EXACT)
    return best


@dataclass(frozen=True)
class DifferenceFamily:
    name: str
    params: tuple
    d: int
    predicted_lower: int
    predicted_upper: int | None
    source: str

    def __post_init__(self):
        if self.d < 1 or self.predicted_lower < 1:
            raise SubstitutionError("family members need d >= 1 and a positive bound")
        if self.predicted_upper is not None and self.predicted_upper < self.predicted_lower:
            raise SubstitutionError("upper bound below lower bound")


def is_cyclic_shift_substitution(sub: Substitution) -> bool:
    """Columns are exactly the shifts a -> a + i on a same-size alphabet."""
    L, c = sub.length, sub.size
    if L != c:
        return False
    return all(sub.rules[a][i] == (a + i) % L for a in range(c) for i in range(L))


def _sub_families(sub: Substitution, ks, names) -> list[DifferenceFamily]:
    group = generate_group(sub)
    if column(sub, 0).image != identity_perm(sub.size):
        raise SubstitutionError("difference families need the zeroth column to be the identity")
    L = sub.length
    e = group.exponent
    pal = palindromicity(sub)
    cyclic_tm = is_cyclic_shift_substitution(sub)

    available = {"identity"}
    if cyclic_tm:
        available.add("tm")
    elif pal.g_witness is not None and group.abelian:
        available.add("palindrome")
    wanted = set(names) if names else available
    for name in wanted - available:
        raise SubstitutionError(f"family {name!r} not applicable to this substitution")

    out = []
    for k in ks:
        if k < 1:
            raise SubstitutionError("family parameters must be >= 1")
        if "identity" in wanted:
            d = (L ** (k * e) - 1) // (L**k - 1)
            out.append(DifferenceFamily(
                "identity", (k,), d, L**k, upper_bound(sub, d), "identity-columns"))
        if "tm" in wanted:
            d = L**k - 1
            lower = L**k + (2 * L if k % L == 0 else 0)
            out.append(DifferenceFamily("tm", (k,), d, lower, upper_bound(sub, d),
                                        "cyclic-shift-refinement"))
        if "palindrome" in wanted:
            d = L**k - 1  # mirror pairing with window exponent 2
            lower = L**k + (2 if pal.inverse_palindromic else 0)
            out.append(DifferenceFamily("palindrome", (k, 2), d, lower,
                                        upper_bound(sub, d), "mirror-columns"))
    return out


def palindromic_member(sub: Substitution, n: int, ell: int) -> DifferenceFamily:
    """General mirror-column member with an even window exponent."""
    if ell < 2 or ell % 2:
        raise SubstitutionError("window exponent must be even and >= 2")
    group = generate_group(sub)
    pal = palindromicity(sub)
    if pal.g_witness is None or not group.abelian:
        raise SubstitutionError("family 'palindrome' not applicable to this substitution")
    L = sub.length
    d = (L ** (n * ell) - 1) // (L**n + 1)
    lower = L**n + (2 if pal.inverse_palindromic else 0)
    return DifferenceFamily("palindrome", (n, ell), d, lower, upper_bound(sub, d),
                            "mirror-columns")


def _spin_families(sys: SpinSystem, ks, names) -> list[DifferenceFamily]:
    L = sys.digits
    kinds: dict[str, tuple] = {}
    if sys == rudin_shapiro():
        kinds["plus"] = ("spin-matrix", lambda n: (2**n + 1, 2 ** (n - 1) + 2, None))
        kinds["minus"] = ("spin-matrix", lambda n: (
            2**n - 1, 2 ** (n - 1) + (1 if n % 2 == 0 else 3), None))
        kinds["pow"] = ("digit-scaling", lambda n: (2**n, 4, 4))
    elif sys == hadamard4():
        kinds["plus"] = ("spin-matrix", lambda n: (4**n + 1, 4 ** (n - 1) + 2, None))
        kinds["minus"] = ("spin-matrix", lambda n: (4**n - 1, 4 ** (n - 1) + 3, None))
        kinds["pow"] = ("digit-scaling", lambda n: (4**n, 6, 6))
    elif sys == vandermonde(L):
        kinds["vandermonde"] = ("spin-matrix", lambda n: (
            (L ** (n * L) - 1) // (L**n - 1), L ** (n - 1) + 1, None))
        kinds["pow"] = ("digit-scaling", lambda n: (L**n, L + 2, L + 2))
    else:
        raise SubstitutionError("no predicted families for this spin matrix")

    wanted = set(names) if names else set(kinds)
    for name in wanted - set(kinds):
        raise SubstitutionError(f"family {name!r} not applicable to this spin system")
    out = []
    for k in ks:
        if k < 1:
            raise SubstitutionError("family parameters must be >= 1")
        for name in sorted(wanted):
            source, gen = kinds[name]
            d, lower, upper = gen(k)
            out.append(DifferenceFamily(name, (k,), d, lower, upper, source))
    return out


def difference_families(target, ks, names=None) -> list[DifferenceFamily]:
    """Predicted difference family members for a substitution or spin system."""
    ks = list(ks)
    if not ks:
        raise SubstitutionError("empty parameter range")
    if isinstance(target, Substitution):
        return _sub_families(target, ks, names)
    if isinstance(target, SpinSystem):
        return _spin_families(target, ks, names)
    raise SubstitutionError(f"unsupported analysis target {type(target).__name__}")


@dataclass(frozen=True)
class BoundReport:
    family: DifferenceFamily
    measured: APResult | None
    verdict: str  # PASS | FAIL | PREDICTED-ONLY | ERROR

    def to_json(self) -> dict:
        return {
            "family": self.family.name,
            "params": list(self.family.params),
            "d": str(self.family.d),
            "predicted_lower": str(self.family.predicted_lower),
            "predicted_upper": None if self.family.predicted_upper is None
            else str(self.family.predicted_upper),
            "measured": None if self.measured is None else self.measured.best_len,
            "status": None if self.measured is None else self.measured.status,
            "verdict": self.verdict,
        }


def verify_family(fp: FixedPointSpec, coding: Coding | None,
                  members, policy: ScanPolicy = ScanPolicy()) -> list[BoundReport]:
    """Measure each member and compare against its predictions.

    Members whose smallest conceivable witness does not fit the prefix cap are
    reported as predictions without measurement; per-member scan errors are
    recorded without aborting the batch.
    """
    src = PrefixSource(fp, coding)
    reports = []
    for member in members:
        if member.d * max(member.predicted_lower, 2) + 1 > policy.prefix_cap:
            reports.append(BoundReport(member, None, "PREDICTED-ONLY"))
            continue
        try:
            measured = a_of_d(fp, coding, member.d, policy,
                              hint_lower=member.predicted_lower, source=src)
        except ResourceCapError:
            reports.append(BoundReport(member, None, "ERROR"))
            continue
        ok = measured.best_len >= member.predicted_lower
        if measured.status == EXACT and member.predicted_upper is not None:
            ok = ok and measured.best_len <= member.predicted_upper
        reports.append(BoundReport(member, measured, "PASS" if ok else "FAIL"))
    return reports


def scan(fp: FixedPointSpec, coding: Coding | None, d_from: int, d_to: int,
         policy: ScanPolicy = ScanPolicy(), jobs: int = 1) -> list[APResult]:
    """A(d) rows for a difference range, deterministic and increasing in d."""
    if not 1 <= d_from <= d_to:
        raise SubstitutionError("need 1 <= d_from <= d_to")
    src = PrefixSource(fp, coding)
    src.get(min(policy.initial_prefix, policy.prefix_cap))

    def one(d: int) -> APResult:
        try:
            return a_of_d(fp, coding, d, policy, source=src)
        except ResourceCapError as exc:
            return APResult(d, 0, 0, 0, f"Error:{exc}")

    ds = range(d_from, d_to + 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, ds))
    return [one(d) for d in ds]
