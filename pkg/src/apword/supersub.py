"""Partition quotients, lifted progression witnesses, and the graph of sets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SubstitutionError
from .groups import generate_group, identity_perm
from .progressions import DifferenceFamily
from .stream import FixedPointSpec, letter_index_at
from .substitution import (
    Alphabet,
    Substitution,
    aperiodicity_certificate,
    column,
    is_bijective,
    is_primitive,
)


@dataclass(frozen=True)
class Partition:
    """Disjoint letter blocks covering the alphabet, ordered by smallest member."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise SubstitutionError("empty partition block")
            if block & seen:
                raise SubstitutionError("overlapping partition blocks")
            seen |= block
        mins = [min(b) for b in self.blocks]
        if mins != sorted(mins):
            raise SubstitutionError("blocks must be ordered by smallest member")

    @classmethod
    def from_names(cls, sub: Substitution, groups) -> "Partition":
        blocks = [frozenset(sub.alphabet.index(x) for x in block) for block in groups]
        blocks.sort(key=min)
        part = cls(tuple(blocks))
        if set().union(*part.blocks) != set(range(sub.size)):
            raise SubstitutionError("partition does not cover the alphabet")
        return part

    def block_of(self, letter: int) -> int:
        for i, block in enumerate(self.blocks):
            if letter in block:
                return i
        raise SubstitutionError(f"letter index {letter} not covered by the partition")


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    theta: tuple[int, ...] | None = None       # letter -> block index
    quotient: Substitution | None = None
    violation: tuple[int, int, int, int] | None = None  # column, block, letter, letter


def check_partition(sub: Substitution, partition: Partition) -> PartitionCheck:
    """Quotient substitution on blocks when every column respects the blocks."""
    if set().union(*partition.blocks) != set(range(sub.size)):
        raise SubstitutionError("partition does not cover the alphabet")
    theta = tuple(partition.block_of(a) for a in range(sub.size))
    n = len(partition.blocks)
    rules = []
    for i, block in enumerate(partition.blocks):
        rule = []
        for ell in range(sub.length):
            images = {sub.rules[a][ell] for a in block}
            targets = {theta[x] for x in images}
            if len(targets) > 1:
                ref = min(block)
                for a in sorted(block):
                    if theta[sub.rules[a][ell]] != theta[sub.rules[ref][ell]]:
                        return PartitionCheck(False, violation=(ell, i, ref, a))
            rule.append(theta[next(iter(images))])
        rules.append(tuple(rule))
    names = Alphabet(tuple(str(i + 1) for i in range(n)))
    return PartitionCheck(True, theta, Substitution(names, tuple(rules)))


def _require_star(xi: Substitution, what: str) -> None:
    """Aperiodic, primitive, bijective, identity zeroth column."""
    if not is_bijective(xi):
        raise SubstitutionError(f"{what} is not bijective")
    if not is_primitive(xi):
        raise SubstitutionError(f"{what} is not primitive")
    if column(xi, 0).image != identity_perm(xi.size):
        raise SubstitutionError(f"{what} does not fix block order in its zeroth column")
    if aperiodicity_certificate(xi, detector_prefix=2**14).status != "AperiodicByCriterion":
        raise SubstitutionError(f"aperiodicity of {what} could not be certified")


def lift_identity_family(sub: Substitution, partition: Partition, ks,
                         seed: str | int | None = None) -> list[DifferenceFamily]:
    """Identity-column family of the quotient, lifted to the original word.

    Needs the seed's block to be a singleton so block hits pin down the letter.
    """
    check = check_partition(sub, partition)
    if not check.ok:
        raise SubstitutionError(f"partition does not induce a quotient: {check.violation}")
    fp = FixedPointSpec.find(sub, seed)
    block0 = partition.block_of(fp.seed)
    if len(partition.blocks[block0]) != 1:
        raise SubstitutionError("seed block must be a singleton to lift progressions")
    xi = check.quotient
    _require_star(xi, "quotient substitution")
    e = generate_group(xi).exponent
    L = sub.length
    out = []
    for k in ks:
        if k < 1:
            raise SubstitutionError("family parameters must be >= 1")
        d = (L ** (k * e) - 1) // (L**k - 1)
        out.append(DifferenceFamily("lifted-identity", (k,), d, L**k, None,
                                    "quotient-identity-columns"))
    return out


def lift_column_family(sub: Substitution, partition: Partition, positions,
                       target_letter: str | int, d: int, max_len: int = 10_000,
                       seed: str | int | None = None) -> list[int]:
    """Verified progression positions k*d whose letters are pinned to one target.

    Each multiple must end (base L) in one of the given column positions, all
    of which send the target's block to the target letter; the truncated index
    must land on the target block in the quotient fixed point. The run stops
    at the first multiple violating either condition, and every returned
    position is re-checked against the actual fixed point.
    """
    target = target_letter if isinstance(target_letter, int) \
        else sub.alphabet.index(target_letter)
    check = check_partition(sub, partition)
    if not check.ok:
        raise SubstitutionError(f"partition does not induce a quotient: {check.violation}")
    block_idx = partition.block_of(target)
    block = partition.blocks[block_idx]
    positions = sorted(set(positions))
    for c in positions:
        if not 0 <= c < sub.length:
            raise SubstitutionError(f"column position {c} out of range")
        for a in block:
            if sub.rules[a][c] != target:
                raise SubstitutionError(
                    f"column {c} does not send block letter "
                    f"{sub.alphabet.letters[a]!r} to the target"
                )
    fp = FixedPointSpec.find(sub, seed)
    if partition.block_of(fp.seed) != block_idx:
        raise SubstitutionError("fixed-point seed lies outside the target block")
    quotient_fp = FixedPointSpec.find(check.quotient, block_idx)
    allowed = set(positions)
    out = []
    for k in range(max_len):
        n = k * d
        if n % sub.length not in allowed:
            break
        if letter_index_at(quotient_fp, n // sub.length) != block_idx:
            break
        if letter_index_at(fp, n) != target:
            raise SubstitutionError(f"internal error: position {n} is not the target letter")
        out.append(n)
    return out


def induced_partition(sub: Substitution, pairs) -> Partition:
    """Convenience tooling: smallest column-compatible partition merging the
    given letter pairs, found by merge-find closure (same block forces the
    columnwise images into the same block). Singleton blocks fill the rest.
    """
    parent = list(range(sub.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = []
    for a, b in pairs:
        ia = a if isinstance(a, int) else sub.alphabet.index(a)
        ib = b if isinstance(b, int) else sub.alphabet.index(b)
        queue.append((ia, ib))
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[ry] = rx
        members = [a for a in range(sub.size) if find(a) == rx]
        ref = members[0]
        for ell in range(sub.length):
            for a in members[1:]:
                queue.append((sub.rules[ref][ell], sub.rules[a][ell]))
    blocks: dict[int, set[int]] = {}
    for a in range(sub.size):
        blocks.setdefault(find(a), set()).add(a)
    ordered = sorted((frozenset(b) for b in blocks.values()), key=min)
    return Partition(tuple(ordered))


@dataclass
class SetGraph:
    alphabet: Alphabet
    nodes: tuple[frozenset[int], ...]
    edges: dict[frozenset[int], tuple[frozenset[int], ...]]  # per digit 0..L-1
    minimal: frozenset[frozenset[int]]
    column_number: int

    def label(self, node: frozenset[int]) -> str:
        return "{" + ",".join(self.alphabet.letters[i] for i in sorted(node)) + "}"


def _strongly_connected(nodes, succ):
    """Iterative Tarjan; returns a list of components, each a set of nodes."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    components = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.add(x)
                    if x == node:
                        break
                components.append(comp)
    return components


def graph_of_sets(sub: Substitution) -> SetGraph:
    """Digraph of column images of alphabet subsets, reachable from the full set.

    Minimal nodes are the smallest sets inside closed bottom components; their
    common size is the column number.
    """
    full = frozenset(range(sub.size))
    edges: dict[frozenset[int], tuple[frozenset[int], ...]] = {}
    order = [full]
    queue = [full]
    while queue:
        node = queue.pop(0)
        if node in edges:
            continue
        targets = tuple(frozenset(sub.rules[a][i] for a in node) for i in range(sub.length))
        edges[node] = targets
        for t in targets:
            if t not in edges and t not in queue:
                order.append(t)
                queue.append(t)

    succ = {node: set(ts) - {node} for node, ts in edges.items()}
    components = _strongly_connected(list(edges), succ)
    comp_of = {}
    for i, comp in enumerate(components):
        for node in comp:
            comp_of[node] = i
    sinks = []
    for i, comp in enumerate(components):
        if all(comp_of[t] == i for node in comp for t in edges[node]):
            sinks.append(comp)
    sink_nodes = [node for comp in sinks for node in comp]
    column_number = min(len(node) for node in sink_nodes)
    minimal = frozenset(node for node in sink_nodes if len(node) == column_number)
    return SetGraph(sub.alphabet, tuple(order), edges, minimal, column_number)


def export_dot(g: SetGraph) -> str:
    """Deterministic DOT with digit-labelled edges, minimal sets double-drawn."""
    nodes = sorted(g.nodes, key=lambda n: (-len(n), g.label(n)))
    ids = {node: f"n{i}" for i, node in enumerate(nodes)}
    lines = ["digraph sets {", f'  // column_number={g.column_number}']
    for node in nodes:
        extra = ", peripheries=2" if node in g.minimal else ""
        lines.append(f'  {ids[node]} [label="{g.label(node)}"{extra}];')
    for node in nodes:
        for digit, target in enumerate(g.edges[node]):
            lines.append(f'  {ids[node]} -> {ids[target]} [label="{digit}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
