"""Random access and bulk prefixes for substitution fixed points."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ResourceCapError, SubstitutionError
from .substitution import Substitution, base_digits

PREFIX_CAP = 2**30


@lru_cache(maxsize=None)
def _rules_array(sub: Substitution) -> np.ndarray:
    return np.array(sub.rules, dtype=np.uint8)


def _cycle_length(sub: Substitution, seed: int) -> int | None:
    """Return time of seed under the first column, or None if seed never returns."""
    x = sub.rules[seed][0]
    for steps in range(1, sub.size + 1):
        if x == seed:
            return steps
        x = sub.rules[x][0]
    return None


@dataclass(frozen=True)
class FixedPointSpec:
    """One-sided fixed point of some power of a substitution.

    The first letter of the image of `seed` under `power` rounds is `seed`
    again, so the iterated images converge to an infinite word.
    """

    sub: Substitution
    seed: int
    power: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < self.sub.size:
            raise SubstitutionError(f"seed index {self.seed} out of range")
        x = self.seed
        for _ in range(self.power):
            x = self.sub.rules[x][0]
        if x != self.seed:
            raise SubstitutionError(
                f"letter {self.sub.alphabet.letters[self.seed]!r} does not restart "
                f"after {self.power} rounds"
            )

    @property
    def seed_letter(self) -> str:
        return self.sub.alphabet.letters[self.seed]

    @classmethod
    def find(cls, sub: Substitution, seed: str | int | None = None) -> "FixedPointSpec":
        """Pick a valid (seed, power), preferring power 1 and low letter index."""
        if seed is not None:
            idx = seed if isinstance(seed, int) else sub.alphabet.index(seed)
            p = _cycle_length(sub, idx)
            if p is None:
                raise SubstitutionError(
                    f"letter {sub.alphabet.letters[idx]!r} starts no fixed point of any power"
                )
            return cls(sub, idx, p)
        best = None
        for a in range(sub.size):
            p = _cycle_length(sub, a)
            if p is not None and (best is None or p < best[0]):
                best = (p, a)
        if best is None:  # unreachable: the first column always has a cycle
            raise SubstitutionError("no fixed point of any power")
        return cls(sub, best[1], best[0])


def letter_index_at(fp: FixedPointSpec, n: int) -> int:
    """Letter at position n, by composing one column per base-L digit."""
    if n < 0:
        raise SubstitutionError("position must be >= 0")
    sub = fp.sub
    digits = base_digits(n, sub.length)
    pad = (-len(digits)) % fp.power
    x = fp.seed
    for _ in range(pad):
        x = sub.rules[x][0]
    for d in reversed(digits):
        x = sub.rules[x][d]
    return x


def letter_at(fp: FixedPointSpec, n: int) -> str:
    return fp.sub.alphabet.letters[letter_index_at(fp, n)]


@dataclass(frozen=True)
class Coding:
    """Letter-to-letter relabelling applied on the fly to streamed prefixes."""

    table: tuple[int, ...]  # input letter index -> output symbol index
    names: tuple[str, ...]  # output symbol per output index

    def __post_init__(self):
        if any(not 0 <= t < len(self.names) for t in self.table):
            raise SubstitutionError("coding table points outside its output alphabet")

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def apply(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(self.table, dtype=np.uint8)[arr]

    @classmethod
    def identity(cls, sub: Substitution) -> "Coding":
        return cls(tuple(range(sub.size)), sub.alphabet.letters)

    @classmethod
    def from_map(cls, sub: Substitution, mapping: dict[str, str]) -> "Coding":
        missing = [a for a in sub.alphabet.letters if a not in mapping]
        if missing:
            raise SubstitutionError(f"coding misses letters {missing}")
        names: list[str] = []
        table = []
        for letter in sub.alphabet.letters:
            symbol = mapping[letter]
            if symbol not in names:
                names.append(symbol)
            table.append(names.index(symbol))
        return cls(tuple(table), tuple(names))


def prefix(fp: FixedPointSpec, length: int, coding: Coding | None = None,
           cap: int = PREFIX_CAP) -> np.ndarray:
    """First `length` letters as a uint8 index array, coded if requested.

    Block-expands full rounds of the substitution, truncating intermediates to
    what later rounds still need, so memory stays proportional to the output.
    """
    if length < 1:
        raise SubstitutionError("prefix length must be >= 1")
    if length > cap:
        raise ResourceCapError(f"prefix of {length} letters exceeds cap {cap}")
    sub = fp.sub
    L = sub.length
    arr = np.array([fp.seed], dtype=np.uint8)
    if L == 1:
        arr = np.full(length, fp.seed, dtype=np.uint8)
    rules = _rules_array(sub)
    while len(arr) < length:
        for j in range(fp.power):
            remaining = fp.power - j - 1
            need = -(-length // L**remaining)  # ceil
            arr = rules[arr].reshape(-1)
            if len(arr) > need:
                arr = arr[:need]
    arr = arr[:length]
    if coding is not None:
        arr = coding.apply(arr)
    return arr


def to_symbols(names, arr) -> list[str]:
    """Render an index array with the given symbol names."""
    return [names[i] for i in arr]
