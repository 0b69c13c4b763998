import random

import numpy as np
import pytest

from apword import (
    Coding,
    FixedPointSpec,
    ResourceCapError,
    SubstitutionError,
    get_builtin,
    letter_at,
    parse_substitution,
    prefix,
    spin_coding,
)

BUILTINS = ["tm:2", "tm:3", "tm:5", "rs", "hadamard4", "vandermonde:3", "outlook6",
            "a4-example", "c3-invpal", "s3-noninvpal", "supersub5", "supersub6"]


@pytest.mark.parametrize("name", BUILTINS)
def test_prefix_matches_explicit_expansion(name):
    b = get_builtin(name)
    fp = b.fixed_point()
    expanded = b.substitution.expand(fp.seed, 4)
    got = prefix(fp, len(expanded))
    assert list(got) == expanded


@pytest.mark.parametrize("name", ["tm:3", "rs", "outlook6"])
def test_letter_at_agrees_with_prefix(name):
    b = get_builtin(name)
    fp = b.fixed_point()
    w = prefix(fp, 2**20)
    rng = random.Random(20260808)
    for _ in range(1000):
        n = rng.randrange(2**20)
        assert letter_at(fp, n) == b.substitution.alphabet.letters[w[n]]


def test_known_prefixes():
    tm = get_builtin("tm:2")
    assert bytes(prefix(tm.fixed_point(), 8)) == bytes([0, 1, 1, 0, 1, 0, 0, 1])
    tm3 = get_builtin("tm:3")
    fp3 = tm3.fixed_point()
    assert [letter_at(fp3, n) for n in range(3)] == ["0", "1", "2"]
    assert letter_at(fp3, 0) == tm3.seed


def test_rs_spin_prefix_matches_listed_values():
    rs = get_builtin("rs")
    u = prefix(rs.fixed_point(), 16, rs.coding("spin"))
    # exponents of the sign sequence 1,1,1,-1,1,1,-1,1,1,1,1,-1,-1,-1,1,-1
    assert list(u) == [0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1]


def test_coding_commutes_with_prefix():
    rs = get_builtin("rs")
    fp = rs.fixed_point()
    coding = rs.coding("spin")
    plain = prefix(fp, 4096)
    assert np.array_equal(coding.apply(plain), prefix(fp, 4096, coding))


def test_coding_from_map_and_injectivity():
    tm = get_builtin("tm:2").substitution
    swap = Coding.from_map(tm, {"0": "x", "1": "y"})
    assert swap.is_injective
    collapse = Coding.from_map(tm, {"0": "x", "1": "x"})
    assert not collapse.is_injective
    with pytest.raises(SubstitutionError):
        Coding.from_map(tm, {"0": "x"})


def test_seed_power_search():
    sub = parse_substitution("a -> ba ; b -> ab")
    fp = FixedPointSpec.find(sub)
    assert fp.power == 2
    w = prefix(fp, 16)
    # fixed point of the square: abba baab baab abba
    assert "".join(sub.alphabet.letters[i] for i in w) == "abbabaabbaababba"
    for n in (0, 3, 7, 11, 15):
        assert letter_at(fp, n) == sub.alphabet.letters[w[n]]


def test_seed_validation():
    sub = parse_substitution("a -> ab ; b -> ab")
    with pytest.raises(SubstitutionError):
        FixedPointSpec(sub, 1, 1)  # rho(b) starts with a, not b
    fp = FixedPointSpec.find(sub, "a")
    assert fp.power == 1


def test_prefix_resource_cap():
    fp = get_builtin("tm:2").fixed_point()
    with pytest.raises(ResourceCapError):
        prefix(fp, 2**20, cap=2**10)
    with pytest.raises(SubstitutionError):
        prefix(fp, 0)


def test_prefix_length_one_is_seed():
    for name in BUILTINS:
        fp = get_builtin(name).fixed_point()
        assert prefix(fp, 1)[0] == fp.seed
