"""Registry of named example substitutions and spin systems."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SubstitutionError
from .spin import (
    SpinSystem,
    build_spin_substitution,
    digit_coding,
    hadamard4,
    rudin_shapiro,
    spin_coding,
    vandermonde,
)
from .stream import Coding, FixedPointSpec
from .substitution import Substitution, parse_substitution
from .supersub import Partition


@dataclass(frozen=True)
class Builtin:
    name: str
    description: str
    substitution: Substitution
    seed: str
    spin: SpinSystem | None = None
    partition: tuple[tuple[str, ...], ...] | None = None
    column_positions: tuple[int, ...] | None = None
    target_letter: str | None = None

    def fixed_point(self) -> FixedPointSpec:
        return FixedPointSpec.find(self.substitution, self.seed)

    def codings(self) -> dict[str, Coding]:
        if self.spin is None:
            return {}
        return {"spin": spin_coding(self.spin), "digit": digit_coding(self.spin)}

    def coding(self, name: str | None) -> Coding | None:
        if name is None or name == "none":
            return None
        table = self.codings()
        if name not in table:
            raise SubstitutionError(f"builtin {self.name!r} has no coding {name!r}")
        return table[name]

    def partition_blocks(self) -> Partition:
        if self.partition is None:
            raise SubstitutionError(f"builtin {self.name!r} has no partition")
        return Partition.from_names(self.substitution, self.partition)


def cyclic_shift_substitution(L: int) -> Substitution:
    """Columns a -> a + i mod L on the digit alphabet of size L."""
    if L < 2:
        raise SubstitutionError("cyclic shift substitutions need L >= 2")
    letters = tuple(str(i) for i in range(L))
    rules = tuple(tuple((a + i) % L for i in range(L)) for a in range(L))
    return Substitution.from_words(letters, {
        letters[a]: [letters[x] for x in rules[a]] for a in range(L)
    })


def _spin_builtin(name: str, description: str, sys: SpinSystem) -> Builtin:
    sub = build_spin_substitution(sys)
    return Builtin(name, description, sub, sub.alphabet.letters[0], spin=sys)


_FIXED: dict[str, Builtin] = {}


def _register(b: Builtin) -> None:
    _FIXED[b.name] = b


_register(Builtin(
    "a4-example",
    "length-3 substitution on 4 letters whose columns generate a 12-element group",
    parse_substitution("0 -> 011 ; 1 -> 120 ; 2 -> 203 ; 3 -> 332"),
    "0",
))

_register(Builtin(
    "c3-invpal",
    "inverse-palindromic length-5 substitution with cyclic Abelian column group",
    parse_substitution("0 -> 02010 ; 1 -> 10121 ; 2 -> 21202"),
    "0",
))

_register(Builtin(
    "s3-noninvpal",
    "inverse-palindromic length-5 substitution with non-Abelian column group",
    parse_substitution("0 -> 01120 ; 1 -> 12001 ; 2 -> 20212"),
    "0",
))

_register(Builtin(
    "supersub5",
    "five letters collapsing onto a bijective three-block quotient",
    parse_substitution(
        "a -> acdaec ; b -> babead ; c -> bacead ; d -> ddabca ; e -> edabca"),
    "a",
    partition=(("a",), ("b", "c"), ("d", "e")),
))

_register(Builtin(
    "supersub6",
    "six letters with two columns pinning the first block to one letter",
    parse_substitution(
        "a -> abbabd ; b -> aabaac ; c -> cddcce ; d -> dccddf ; e -> effeea ; f -> fefefb"),
    "a",
    partition=(("a", "b"), ("c", "d"), ("e", "f")),
    column_positions=(0, 3),
    target_letter="a",
))

_register(Builtin(
    "outlook6",
    "non-bijective length-2 substitution with column number 2",
    parse_substitution("a -> ad ; b -> bc ; c -> ea ; d -> ab ; e -> bf ; f -> ba"),
    "a",
))

_register(_spin_builtin(
    "rs", "Rudin-Shapiro spin substitution on digit/spin pairs", rudin_shapiro()))
_register(_spin_builtin(
    "hadamard4", "spin substitution of the 4x4 Hadamard sign matrix", hadamard4()))


def builtin_names() -> list[str]:
    return sorted(_FIXED) + ["tm:L", "vandermonde:L"]


def get_builtin(name: str) -> Builtin:
    """Look up a fixed builtin or a parametrized one like tm:3 / vandermonde:5."""
    if name in _FIXED:
        return _FIXED[name]
    if ":" in name:
        head, _, arg = name.partition(":")
        try:
            L = int(arg)
        except ValueError:
            raise SubstitutionError(f"bad parameter in builtin name {name!r}") from None
        if head == "tm":
            return Builtin(name, f"cyclic shift substitution on {L} letters",
                           cyclic_shift_substitution(L), "0")
        if head == "vandermonde":
            if L == 2:
                return _spin_builtin(name, "Vandermonde spin system (L=2)", rudin_shapiro())
            return _spin_builtin(name, f"Vandermonde spin system (L={L})", vandermonde(L))
    raise SubstitutionError(f"unknown builtin {name!r}; known: {', '.join(builtin_names())}")
