"""Constant-length substitutions: parsing, columns, language, recurrence data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import ParseError, ResourceCapError, SubstitutionError

MAX_DENSE_ALPHABET = 256  # letters are stored as uint8 in bulk kernels


def wielandt_cap(n: int) -> int:
    """Exponent cap after which a primitive 0/1 matrix power must be positive."""
    return n * n - 2 * n + 2


@lru_cache(maxsize=None)
def _index_map(letters: tuple[str, ...]) -> dict[str, int]:
    return {letter: i for i, letter in enumerate(letters)}


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet of distinct whitespace-free tokens."""

    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise SubstitutionError("alphabet must not be empty")
        if len(set(self.letters)) != len(self.letters):
            raise SubstitutionError("alphabet has duplicate letters")
        if len(self.letters) > MAX_DENSE_ALPHABET:
            raise SubstitutionError(f"alphabet larger than {MAX_DENSE_ALPHABET} letters")
        for token in self.letters:
            if not token or any(ch.isspace() for ch in token):
                raise SubstitutionError(f"bad letter token {token!r}")

    @property
    def size(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        try:
            return _index_map(self.letters)[letter]
        except KeyError:
            raise SubstitutionError(f"unknown letter {letter!r}") from None

    def word_str(self, indices) -> str:
        """Render a word of letter indices; single-char alphabets join bare."""
        names = [self.letters[i] for i in indices]
        sep = "" if all(len(n) == 1 for n in self.letters) else " "
        return sep.join(names)


@dataclass(frozen=True)
class ColumnMap:
    """One column of a substitution, as a self-map of the alphabet."""

    image: tuple[int, ...]

    @property
    def kind(self) -> str:
        values = len(set(self.image))
        if values == len(self.image):
            return "bijective"
        if values == 1:
            return "coincidence"
        return "partial-coincidence"

    @property
    def is_bijective(self) -> bool:
        return self.kind == "bijective"

    @property
    def is_coincidence(self) -> bool:
        return self.kind == "coincidence"

    def __call__(self, a: int) -> int:
        return self.image[a]

    def compose(self, other: "ColumnMap") -> "ColumnMap":
        """self after other: (self . other)(a) = self(other(a))."""
        return ColumnMap(tuple(self.image[x] for x in other.image))


@dataclass(frozen=True)
class Substitution:
    """Constant-length substitution given as one length-L word per letter."""

    alphabet: Alphabet
    rules: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        c = self.alphabet.size
        if len(self.rules) != c:
            raise SubstitutionError(f"expected {c} rules, got {len(self.rules)}")
        length = len(self.rules[0])
        if length < 1:
            raise SubstitutionError("rules must be non-empty words")
        for a, rule in enumerate(self.rules):
            if len(rule) != length:
                raise SubstitutionError(
                    f"unequal rule lengths: rule for {self.alphabet.letters[a]!r} "
                    f"has length {len(rule)}, expected {length}"
                )
            for x in rule:
                if not 0 <= x < c:
                    raise SubstitutionError(f"letter index {x} out of range in rule {a}")

    @property
    def size(self) -> int:
        return self.alphabet.size

    @property
    def length(self) -> int:
        return len(self.rules[0])

    @classmethod
    def from_words(cls, letters, words) -> "Substitution":
        """Build from an ordered letter list and a mapping letter -> word tokens."""
        alphabet = Alphabet(tuple(letters))
        rules = []
        for letter in alphabet.letters:
            if letter not in words:
                raise SubstitutionError(f"missing rule for letter {letter!r}")
            rules.append(tuple(alphabet.index(tok) for tok in words[letter]))
        return cls(alphabet, tuple(rules))

    def word(self, a: int) -> str:
        return self.alphabet.word_str(self.rules[a])

    def apply(self, word) -> list[int]:
        out = []
        for a in word:
            out.extend(self.rules[a])
        return out

    def expand(self, a: int, n: int, cap: int = 4_000_000) -> list[int]:
        """Explicit image of letter a under n rounds of substitution."""
        if self.length**n > cap:
            raise ResourceCapError(f"expansion of size {self.length}^{n} exceeds cap {cap}")
        word = [a]
        for _ in range(n):
            word = self.apply(word)
        return word


def _tokenize_rule_word(text: str) -> list[str]:
    text = text.strip()
    if any(ch.isspace() for ch in text):
        return text.split()
    return list(text)


def _parse_json_substitution(source: str) -> Substitution:
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON substitution: {exc}") from None
    if not isinstance(data, dict) or "rules" not in data:
        raise ParseError("JSON substitution needs an object with a 'rules' field")
    rules = data["rules"]
    letters = data.get("alphabet") or sorted(rules)
    words = {}
    for letter, word in rules.items():
        words[letter] = list(word) if isinstance(word, list) else _tokenize_rule_word(str(word))
    for letter in letters:
        if letter not in words:
            raise ParseError(f"missing rule for letter {letter!r}")
    return Substitution.from_words(letters, words)


def parse_substitution(source: str) -> Substitution:
    """Parse 'letter -> word' clauses separated by ';' or newlines.

    '#' starts a comment, '@alphabet a b c' fixes letter order. A rule word is
    split on whitespace when it contains any, else into single characters.
    A JSON object {"alphabet": [...], "rules": {...}} is accepted as well.
    """
    if source.lstrip().startswith("{"):
        return _parse_json_substitution(source)

    header: list[str] | None = None
    entries: list[tuple[str, list[str], int]] = []  # letter, word tokens, line no
    for lineno, raw in enumerate(source.splitlines() or [source], start=1):
        line = raw.split("#", 1)[0]
        for clause in line.split(";"):
            clause = clause.strip()
            if not clause:
                continue
            if clause.startswith("@alphabet"):
                header = clause[len("@alphabet"):].split()
                if not header:
                    raise ParseError("empty @alphabet header", line=lineno)
                continue
            if "->" not in clause:
                raise ParseError(f"expected 'letter -> word', got {clause!r}", line=lineno)
            lhs, rhs = clause.split("->", 1)
            letter = lhs.strip()
            if not letter or any(ch.isspace() for ch in letter):
                raise ParseError(f"bad letter {lhs.strip()!r} on rule left-hand side", line=lineno)
            tokens = _tokenize_rule_word(rhs)
            if not tokens:
                raise ParseError(f"empty rule word for {letter!r}", line=lineno)
            entries.append((letter, tokens, lineno))

    if not entries:
        raise ParseError("no rules found")

    words: dict[str, list[str]] = {}
    order: list[str] = []
    for letter, tokens, lineno in entries:
        if letter in words:
            raise ParseError(f"duplicate rule for letter {letter!r}", line=lineno)
        words[letter] = tokens
        order.append(letter)

    letters = header if header is not None else order
    known = set(letters)
    for letter, tokens, lineno in entries:
        if letter not in known:
            raise ParseError(f"rule for letter {letter!r} not in @alphabet header", line=lineno)
        for tok in tokens:
            if tok not in known:
                if header is None and tok not in words:
                    raise ParseError(f"missing rule for letter {tok!r}", line=lineno)
                raise ParseError(f"unknown letter {tok!r} in rule for {letter!r}", line=lineno)
    for letter in letters:
        if letter not in words:
            raise ParseError(f"missing rule for letter {letter!r}")

    lengths = {len(tokens) for tokens in words.values()}
    if len(lengths) != 1:
        raise ParseError(f"unequal rule lengths: {sorted(lengths)}")
    return Substitution.from_words(letters, words)


def column(sub: Substitution, i: int) -> ColumnMap:
    """The map sending each letter to position i of its image word."""
    if not 0 <= i < sub.length:
        raise SubstitutionError(f"column index {i} out of range 0..{sub.length - 1}")
    return ColumnMap(tuple(rule[i] for rule in sub.rules))


def columns(sub: Substitution) -> list[ColumnMap]:
    return [column(sub, i) for i in range(sub.length)]


def is_bijective(sub: Substitution) -> bool:
    return all(col.is_bijective for col in columns(sub))


def base_digits(k: int, base: int) -> list[int]:
    """Digits of k in the given base, least significant first; 0 -> []."""
    digits = []
    while k:
        k, r = divmod(k, base)
        digits.append(r)
    return digits


def power_column(sub: Substitution, k: int, n: int) -> ColumnMap:
    """Column k of n rounds of substitution, composed digit by digit.

    Never materializes the expanded rules; cost is O(n c).
    """
    L = sub.length
    if n < 0 or not 0 <= k < L**n:
        raise SubstitutionError(f"column index {k} out of range for length {L}^{n}")
    digits = base_digits(k, L)
    image = []
    for a in range(sub.size):
        x = a
        for j in range(n - 1, -1, -1):
            d = digits[j] if j < len(digits) else 0
            x = sub.rules[x][d]
        image.append(x)
    return ColumnMap(tuple(image))


def is_primitive(sub: Substitution) -> bool:
    """Some power of the incidence matrix is entrywise positive.

    Boolean squaring up to the Wielandt cap; positivity is monotone here
    because every row of the incidence matrix is non-empty.
    """
    c = sub.size
    if c == 1:
        return True
    reach = [frozenset(rule) for rule in sub.rules]
    cap = wielandt_cap(c)
    steps = 1
    while steps < cap:
        reach = [frozenset().union(*(reach[b] for b in row)) for row in reach]
        steps *= 2
    return all(len(row) == c for row in reach)


@lru_cache(maxsize=None)
def _legal_index_words(sub: Substitution, n: int) -> frozenset[tuple[int, ...]]:
    if n < 1:
        raise SubstitutionError("word length must be >= 1")
    if n == 1:
        return frozenset((a,) for a in range(sub.size))
    L = sub.length
    if L == 1:
        return frozenset()  # images never grow past one letter

    def subwords(word):
        return {tuple(word[i:i + n]) for i in range(len(word) - n + 1)}

    m0 = 0
    while L**m0 < n:
        m0 += 1
    words: set[tuple[int, ...]] = set()
    for a in range(sub.size):
        words |= subwords(sub.expand(a, m0))
    while True:
        new = set(words)
        for w in words:
            new |= subwords(sub.apply(w))
        if new == words:
            return frozenset(words)
        words = new


def legal_words(sub: Substitution, n: int) -> set[str]:
    """All length-n words occurring in some iterated image of a letter."""
    return {sub.alphabet.word_str(w) for w in _legal_index_words(sub, n)}


@dataclass(frozen=True)
class CollaredSubstitution:
    """Substitution on legal 2-words, each letter collared by its right neighbour."""

    base: Substitution
    pairs: tuple[tuple[int, int], ...]
    rules: tuple[tuple[int, ...], ...]  # indices into pairs

    def pair_name(self, idx: int) -> str:
        a, b = self.pairs[idx]
        letters = self.base.alphabet.letters
        return f"{letters[a]}_{letters[b]}"

    def to_substitution(self) -> Substitution:
        alphabet = Alphabet(tuple(self.pair_name(i) for i in range(len(self.pairs))))
        return Substitution(alphabet, self.rules)


def induced_two_block(sub: Substitution) -> CollaredSubstitution:
    """Rewrite the substitution over collared letters a_b with ab legal."""
    pairs = sorted(_legal_index_words(sub, 2))
    index = {p: i for i, p in enumerate(pairs)}
    L = sub.length
    rules = []
    for a, b in pairs:
        image = list(sub.rules[a]) + list(sub.rules[b])
        rule = []
        for i in range(L):
            collared = (image[i], image[i + 1])
            rule.append(index[collared])
        rules.append(tuple(rule))
    return CollaredSubstitution(sub, tuple(pairs), tuple(rules))


def _pair_sets_by_level(sub: Substitution):
    """Yield, per level n >= 1, the map a -> set of 2-subwords of the n-th image of a."""
    L = sub.length
    letters = {a: {a} for a in range(sub.size)}
    pairs: dict[int, set] = {a: set() for a in range(sub.size)}
    while True:
        new_pairs = {}
        new_letters = {}
        for a in range(sub.size):
            inner = set()
            for x in letters[a]:
                rule = sub.rules[x]
                inner |= {(rule[i], rule[i + 1]) for i in range(L - 1)}
            for x, y in pairs[a]:
                inner.add((sub.rules[x][L - 1], sub.rules[y][0]))
            new_pairs[a] = inner
            new_letters[a] = set().union(*(set(sub.rules[x]) for x in letters[a]))
        letters, pairs = new_letters, new_pairs
        yield pairs


def min_pair_cover_power(sub: Substitution) -> int:
    """Least n such that every image of level n contains every legal 2-word."""
    if not is_primitive(sub):
        raise SubstitutionError("pair-cover power needs a primitive substitution")
    target = _legal_index_words(sub, 2)
    bound = sub.size**4 - 2 * sub.size**2 + 3
    for n, pairs in enumerate(_pair_sets_by_level(sub), start=1):
        if all(pairs[a] >= target for a in range(sub.size)):
            return n
        if n > bound:
            raise SubstitutionError("pair cover power exceeded its theoretical bound")


@dataclass(frozen=True)
class RecurrenceReport:
    """Linear-recurrence data: the generic constant plus exact values when scanned."""

    c: int
    L: int
    r_formula: int
    n_bound: int
    n_exact: int | None = None
    zeta2_exact: int | None = None
    r_exact: int | None = None
    prefix_scanned: int | None = None

    def __post_init__(self):
        if self.n_exact is not None and self.n_exact > self.n_bound:
            raise SubstitutionError("exact pair-cover power exceeds its bound")


def recurrence_formula(c: int, L: int) -> tuple[int, int]:
    """Generic recurrence constant and pair-cover bound for c letters, length L."""
    n_bound = c**4 - 2 * c**2 + 3
    return 2 * L**n_bound - L, n_bound


def recurrence_constants(
    sub: Substitution,
    mode: str = "formula",
    *,
    prefix_cap: int | None = None,
    practical_cap: int = 2**26,
) -> RecurrenceReport:
    """Recurrence data; exact mode scans one fixed point for return-word gaps.

    The scan window is sized so every return word to a legal 2-word must
    already have occurred; hitting a cap first is an error, not a guess.
    """
    c, L = sub.size, sub.length
    r_formula, n_bound = recurrence_formula(c, L)
    if mode == "formula":
        return RecurrenceReport(c, L, r_formula, n_bound)
    if mode != "exact":
        raise SubstitutionError(f"unknown mode {mode!r}")

    n_exact = min_pair_cover_power(sub)
    gap_bound = 2 * L**n_exact - 1  # a 2-word recurs inside every two level-n images
    needed = (L * gap_bound + 1) * (gap_bound + 2)
    if prefix_cap is None:
        prefix_cap = L
        while prefix_cap < 2 * L**n_bound * L:
            prefix_cap *= L
    cap = min(prefix_cap, practical_cap)
    if needed > cap:
        raise ResourceCapError(
            f"exact recurrence scan needs a prefix of {needed} letters, cap is {cap}"
        )

    import numpy as np

    from .stream import FixedPointSpec, prefix

    fp = FixedPointSpec.find(sub)
    w = prefix(fp, needed)
    codes = w[:-1].astype(np.int32) * c + w[1:]
    zeta2 = 0
    for a, b in sorted(_legal_index_words(sub, 2)):
        positions = np.flatnonzero(codes == a * c + b)
        if len(positions) < 2:
            raise ResourceCapError(
                f"2-word {sub.alphabet.word_str((a, b))!r} did not recur in {needed} letters"
            )
        gap = int(np.diff(positions).max())
        if gap > gap_bound:
            raise SubstitutionError("return-word gap exceeded its structural bound")
        zeta2 = max(zeta2, gap)
    return RecurrenceReport(c, L, r_formula, n_bound, n_exact, zeta2, L * zeta2, needed)


@dataclass(frozen=True)
class AperiodicityResult:
    status: str  # "AperiodicByCriterion" | "PeriodicDetected" | "Unknown"
    period: int | None = None
    detail: str = ""


def _min_period(seq) -> int:
    """Smallest p with seq[i] == seq[i-p] for all i >= p (border-based)."""
    n = len(seq)
    border = [0] * n
    k = 0
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = border[k - 1]
        if seq[i] == seq[k]:
            k += 1
        border[i] = k
    return n - border[-1]


def aperiodicity_certificate(sub: Substitution, *, detector_prefix: int = 2**20) -> AperiodicityResult:
    """Certify aperiodicity for primitive bijective substitutions, else try to
    detect a periodic fixed point on a prefix."""
    if is_primitive(sub) and is_bijective(sub):
        pairs = sorted(_legal_index_words(sub, 2))
        starts = [a for a, _ in pairs]
        ends = [b for _, b in pairs]
        if len(starts) != len(set(starts)) or len(ends) != len(set(ends)):
            return AperiodicityResult(
                "AperiodicByCriterion",
                detail="two legal 2-words share a first or last letter",
            )

    from .stream import FixedPointSpec, prefix

    fp = FixedPointSpec.find(sub)
    n = detector_prefix
    w = bytes(prefix(fp, n))
    p = _min_period(w)
    if p <= n // 2:
        block = list(w[:p])
        if sub.apply(block) == block * sub.length:
            return AperiodicityResult("PeriodicDetected", period=p)
    return AperiodicityResult("Unknown")


@dataclass(frozen=True)
class HeightResult:
    value: int
    prefix_len: int


def height(sub: Substitution, prefix_len: int) -> HeightResult:
    """Largest divisor of gcd{a > 0 : w_a = w_0} coprime to L, over a prefix."""
    import numpy as np

    from .stream import FixedPointSpec, prefix

    fp = FixedPointSpec.find(sub)
    w = prefix(fp, prefix_len)
    positions = np.flatnonzero(w[1:] == w[0]) + 1
    if len(positions) == 0:
        raise SubstitutionError(
            f"prefix of {prefix_len} letters has no second occurrence of the first letter"
        )
    g = 0
    for pos in positions:
        g = gcd(g, int(pos))
        if g == 1:
            break
    L = sub.length
    while (d := gcd(g, L)) > 1:
        g //= d
    return HeightResult(g, prefix_len)


def substitution_power(sub: Substitution, n: int, cap: int = 1_000_000) -> Substitution:
    """Materialize n rounds of the substitution as a single substitution."""
    if n < 1:
        raise SubstitutionError("power must be >= 1")
    rules = tuple(tuple(sub.expand(a, n, cap=cap)) for a in range(sub.size))
    return Substitution(sub.alphabet, rules)
