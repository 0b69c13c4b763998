import re

import pytest

from apword import (
    Partition,
    SubstitutionError,
    check_partition,
    export_dot,
    get_builtin,
    graph_of_sets,
    letter_at,
    lift_column_family,
    lift_identity_family,
    parse_substitution,
    prefix,
)


def blocks(name):
    b = get_builtin(name)
    return b, b.partition_blocks()


def test_partition_canonical_order_and_validation():
    sub = get_builtin("supersub5").substitution
    part = Partition.from_names(sub, [["d", "e"], ["a"], ["b", "c"]])
    assert [min(b) for b in part.blocks] == sorted(min(b) for b in part.blocks)
    with pytest.raises(SubstitutionError):
        Partition.from_names(sub, [["a", "b"], ["b", "c"], ["d", "e"]])
    with pytest.raises(SubstitutionError):
        Partition.from_names(sub, [["a"], ["b", "c"]])


def test_check_partition_supersub5():
    b, part = blocks("supersub5")
    res = check_partition(b.substitution, part)
    assert res.ok
    xi = res.quotient
    words = {xi.alphabet.letters[a]: xi.word(a) for a in range(3)}
    assert words == {"1": "123132", "2": "212313", "3": "331221"}


def test_check_partition_supersub6():
    b, part = blocks("supersub6")
    res = check_partition(b.substitution, part)
    assert res.ok
    xi = res.quotient
    assert {xi.alphabet.letters[a]: xi.word(a) for a in range(3)} == {
        "1": "111112", "2": "222223", "3": "333331"}


def test_check_partition_invalid_with_counterexample():
    sub = get_builtin("outlook6").substitution
    part = Partition.from_names(sub, [["a", "b"], ["c", "d", "e", "f"]])
    res = check_partition(sub, part)
    assert not res.ok and res.quotient is None
    ell, block, x, y = res.violation
    assert ell == 0 and block == 1
    names = {sub.alphabet.letters[x], sub.alphabet.letters[y]}
    assert "c" in names or "d" in names


@pytest.mark.parametrize("name", ["supersub5", "supersub6"])
def test_commuting_square(name):
    b, part = blocks(name)
    sub = b.substitution
    res = check_partition(sub, part)
    theta, xi = res.theta, res.quotient
    for a in range(sub.size):
        left = [theta[x] for x in sub.rules[a]]
        right = list(xi.rules[theta[a]])
        assert left == right


@pytest.mark.parametrize("name", ["supersub5", "supersub6"])
def test_quotient_fixed_point_is_projection(name):
    b, part = blocks(name)
    res = check_partition(b.substitution, part)
    fp = b.fixed_point()
    from apword import FixedPointSpec
    qfp = FixedPointSpec.find(res.quotient, res.theta[fp.seed])
    n = b.substitution.length**5
    v = prefix(fp, n)
    w = prefix(qfp, n)
    assert all(res.theta[v[i]] == w[i] for i in range(n))


def test_lift_identity_family_supersub5():
    b, part = blocks("supersub5")
    fams = lift_identity_family(b.substitution, part, [1, 2])
    assert fams[0].d == (6**6 - 1) // 5 and fams[0].predicted_lower == 6
    assert fams[1].d == (6**12 - 1) // 35 and fams[1].predicted_lower == 36


def test_lift_identity_family_rejects_trivial_quotient():
    b = get_builtin("supersub5")
    sub = b.substitution
    whole = Partition.from_names(sub, [["a", "b", "c", "d", "e"]])
    with pytest.raises(SubstitutionError):
        lift_identity_family(sub, whole, [1])


def test_lift_identity_family_needs_singleton_seed_block():
    b, part = blocks("supersub6")
    with pytest.raises(SubstitutionError) as err:
        lift_identity_family(b.substitution, part, [1])
    assert "singleton" in str(err.value)


def test_lift_column_family_supersub6():
    b, part = blocks("supersub6")
    for d, expect in [(129, 4), (3999, 24)]:
        pos = lift_column_family(b.substitution, part, b.column_positions, "a", d)
        assert len(pos) >= expect
        fp = b.fixed_point()
        for p in pos:
            assert letter_at(fp, p) == "a"


def test_lift_column_family_stops_outside_columns():
    b, part = blocks("supersub6")
    pos = lift_column_family(b.substitution, part, b.column_positions, "a", 1)
    assert pos == [0]  # k = 1 ends in digit 1, outside {0, 3}


def test_lift_column_family_validates_columns():
    b, part = blocks("supersub6")
    with pytest.raises(SubstitutionError):
        lift_column_family(b.substitution, part, (0, 1), "a", 129)


def test_induced_partition_tooling():
    from apword import induced_partition
    b6 = get_builtin("supersub6")
    part = induced_partition(b6.substitution, [("a", "b")])
    assert part == b6.partition_blocks()
    b5 = get_builtin("supersub5")
    part5 = induced_partition(b5.substitution, [("b", "c")])
    assert [len(blk) for blk in part5.blocks] == [1, 2, 1, 1]
    assert check_partition(b5.substitution, part5).ok


def test_graph_of_sets_outlook6():
    g = graph_of_sets(get_builtin("outlook6").substitution)
    assert len(g.nodes) == 9
    assert g.column_number == 2
    assert sorted(g.label(n) for n in g.minimal) == ["{a,b}", "{a,e}", "{c,d}", "{d,f}"]


def test_graph_minimal_nodes_closed_and_equal_size():
    for name in ["outlook6", "supersub6", "rs"]:
        g = graph_of_sets(get_builtin(name).substitution)
        sizes = {len(n) for n in g.minimal}
        assert sizes == {g.column_number}
        for node in g.minimal:
            for target in g.edges[node]:
                assert target in g.minimal


@pytest.mark.parametrize("name", ["tm:2", "tm:3", "a4-example", "c3-invpal"])
def test_graph_of_bijective_is_single_node(name):
    sub = get_builtin(name).substitution
    g = graph_of_sets(sub)
    assert len(g.nodes) == 1
    assert g.column_number == sub.size


def test_graph_coincidence_reaches_singleton():
    g = graph_of_sets(parse_substitution("a -> ab ; b -> aa"))
    assert any(len(n) == 1 for n in g.nodes)
    assert g.column_number == 1


def test_export_dot_deterministic_and_round_trip():
    sub = get_builtin("outlook6").substitution
    g = graph_of_sets(sub)
    dot = export_dot(g)
    assert dot == export_dot(graph_of_sets(sub))
    labels = re.findall(r'label="\{([^"]*)\}"', dot)
    parsed = {frozenset(label.split(",")) for label in labels}
    assert parsed == {frozenset(sub.alphabet.letters[i] for i in node) for node in g.nodes}
    assert dot.count("peripheries=2") == len(g.minimal)
    assert 'label="0"' in dot and 'label="1"' in dot


def test_export_dot_degenerate_length_one():
    g = graph_of_sets(parse_substitution("a -> a"))
    dot = export_dot(g)
    assert "n0 -> n0" in dot and 'label="0"' in dot
