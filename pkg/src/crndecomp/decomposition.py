"""Decompositions and coverings of a network's reaction set.

Classification follows the usual dimension counts: a decomposition is
*independent* when the stoichiometric ranks add up (``s == sum s_i``) and
*incidence independent* when the incidence ranks add up
(``n - l == sum (n_i - l_i)``). C- and C*-decompositions are those whose
blocks share no complexes, resp. no nonzero complexes.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

from .exactla import kernel_basis, span_rank
from .model import Network
from .structure import connected_components, linkage_class_reactions, s_complexes


class DecompositionError(ValueError):
    pass


class LemmaViolation(RuntimeError):
    """A reaction joined an S-complex to a non-S-complex; this cannot happen."""


@dataclass(frozen=True)
class Decomposition:
    """Blocks of reaction indices whose union is ``range(n_reactions)``.

    With ``covering=True`` blocks may overlap; otherwise they must partition
    the reaction set.
    """

    blocks: tuple[tuple[int, ...], ...]
    n_reactions: int
    covering: bool = False

    def __post_init__(self):
        blocks = tuple(tuple(sorted(set(b))) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        total = 0
        for b in blocks:
            if not b:
                raise DecompositionError("empty block")
            for j in b:
                if not 0 <= j < self.n_reactions:
                    raise DecompositionError(f"reaction index {j} out of range")
            seen.update(b)
            total += len(b)
        if len(seen) != self.n_reactions:
            missing = sorted(set(range(self.n_reactions)) - seen)
            raise DecompositionError(f"blocks do not cover reactions {missing}")
        if not self.covering and total != self.n_reactions:
            raise DecompositionError("blocks overlap; pass covering=True for a covering")

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def is_partition(self) -> bool:
        return sum(len(b) for b in self.blocks) == self.n_reactions

    def canonical(self) -> frozenset[frozenset[int]]:
        """Order-free form, for comparing partitions."""
        return frozenset(frozenset(b) for b in self.blocks)

    def block_of(self) -> list[int]:
        """Block index of every reaction (partitions only)."""
        if not self.is_partition:
            raise DecompositionError("block_of is only defined for partitions")
        out = [0] * self.n_reactions
        for k, b in enumerate(self.blocks):
            for j in b:
                out[j] = k
        return out

    @classmethod
    def from_keys(cls, net: Network, blocks: Iterable[Iterable[int | str]], covering: bool = False) -> Decomposition:
        """Build from reaction labels or 0-based indices."""
        return cls(tuple(tuple(net.reaction_index(x) for x in b) for b in blocks), net.r, covering)

    def to_dict(self, net: Network | None = None) -> dict:
        if net is not None and all(rx.label is not None for rx in net.reactions):
            return {"blocks": [[net.reactions[j].label for j in b] for b in self.blocks]}
        return {"blocks": [list(b) for b in self.blocks]}

    def to_json(self, net: Network | None = None, **kwargs) -> str:
        return json.dumps(self.to_dict(net), **kwargs)

    @classmethod
    def from_dict(cls, net: Network, data: Mapping) -> Decomposition:
        blocks = data["blocks"]
        covering = bool(data.get("covering", False))
        flat = [x for b in blocks for x in b]
        if not covering and len(flat) != len(set(flat)):
            covering = True
        return cls.from_keys(net, blocks, covering=covering)


def trivial(net: Network) -> Decomposition:
    return Decomposition((tuple(range(net.r)),), net.r)


def discrete(net: Network) -> Decomposition:
    return Decomposition(tuple((j,) for j in range(net.r)), net.r)


def linkage_decomposition(net: Network) -> Decomposition:
    return Decomposition(tuple(tuple(b) for b in linkage_class_reactions(net)), net.r)


def subnetwork(net: Network, block: Iterable[int]) -> Network:
    """The subnetwork induced by a nonempty set of reaction indices."""
    block = sorted(set(block))
    if not block:
        raise DecompositionError("empty block")
    pairs = net.reaction_pairs()
    return Network.from_reactions([pairs[j] for j in block])


def coarsen(d: Decomposition, grouping: Sequence[Sequence[int]]) -> Decomposition:
    """Merge blocks per ``grouping``, a partition of ``range(d.k)``."""
    flat = [g for grp in grouping for g in grp]
    if sorted(flat) != list(range(d.k)) or any(not grp for grp in grouping):
        raise DecompositionError(f"grouping {grouping!r} does not partition block indices 0..{d.k - 1}")
    blocks = tuple(tuple(j for g in grp for j in d.blocks[g]) for grp in grouping)
    return Decomposition(blocks, d.n_reactions, d.covering)


def is_refinement(fine: Decomposition, coarse: Decomposition) -> bool:
    """True iff every block of ``fine`` lies inside exactly one block of ``coarse``."""
    if fine.n_reactions != coarse.n_reactions:
        return False
    csets = [set(b) for b in coarse.blocks]
    for b in fine.blocks:
        holders = [c for c in csets if set(b) <= c]
        if len(holders) != 1:
            return False
    return True


# --------------------------------------------------------------------------
# per-block numbers


@dataclass(frozen=True)
class BlockStats:
    n: int
    l: int
    s: int
    delta: int
    complexes: frozenset[int]
    has_zero: bool


def _block_stats(net: Network, block: Sequence[int]) -> BlockStats:
    rxs = [net.reactions[j] for j in block]
    cx = sorted({rx.reactant for rx in rxs} | {rx.product for rx in rxs})
    local = {c: i for i, c in enumerate(cx)}
    l = len(connected_components(len(cx), [(local[rx.reactant], local[rx.product]) for rx in rxs]))
    rv = net.reaction_vectors()
    s = span_rank([rv[j] for j in block], net.m)
    z = net.zero_complex_index
    return BlockStats(len(cx), l, s, len(cx) - l - s, frozenset(cx), z is not None and z in local)


def _network_counts(net: Network) -> tuple[int, int, int]:
    n = net.n
    l = len(connected_components(n, [(rx.reactant, rx.product) for rx in net.reactions]))
    s = span_rank(net.reaction_vectors(), net.m)
    return n, l, s


@dataclass(frozen=True)
class DecompositionReport:
    k: int
    blocks: list[dict] = field(repr=False)
    delta: int
    sum_delta: int
    independent: bool
    incidence_independent: bool
    bi_independent: bool
    is_C: bool
    is_C_star: bool
    k0: int
    deficiency_slack_low: int
    deficiency_slack_high: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _pairwise_disjoint(sets: Sequence[frozenset[int]]) -> bool:
    seen: set[int] = set()
    for s in sets:
        if seen & s:
            return False
        seen |= s
    return True


def classify(net: Network, d: Decomposition) -> DecompositionReport:
    """Exact classification of a decomposition.

    ``deficiency_slack_low = delta - sum(delta_i)`` is nonnegative for incidence
    independent decompositions; ``deficiency_slack_high = sum(delta_i) - delta``
    is nonnegative for independent ones.
    """
    if not d.is_partition:
        raise DecompositionError("independence is only defined for decompositions, not coverings")
    if d.n_reactions != net.r:
        raise DecompositionError("decomposition does not match the network's reaction count")
    n, l, s = _network_counts(net)
    stats = [_block_stats(net, b) for b in d.blocks]
    delta = n - l - s
    sum_delta = sum(b.delta for b in stats)
    independent = s == sum(b.s for b in stats)
    inc_independent = n - l == sum(b.n - b.l for b in stats)
    z = net.zero_complex_index
    is_c = _pairwise_disjoint([b.complexes for b in stats])
    is_c_star = _pairwise_disjoint([b.complexes - {z} for b in stats]) if z is not None else is_c
    return DecompositionReport(
        k=d.k,
        blocks=[{"n": b.n, "l": b.l, "s": b.s, "delta": b.delta} for b in stats],
        delta=delta,
        sum_delta=sum_delta,
        independent=independent,
        incidence_independent=inc_independent,
        bi_independent=independent and inc_independent,
        is_C=is_c,
        is_C_star=is_c_star,
        k0=sum(b.has_zero for b in stats),
        deficiency_slack_low=delta - sum_delta,
        deficiency_slack_high=sum_delta - delta,
    )


def is_c_decomposition(net: Network, d: Decomposition) -> bool:
    return _pairwise_disjoint([_block_stats(net, b).complexes for b in d.blocks])


def is_c_star_decomposition(net: Network, d: Decomposition) -> bool:
    z = net.zero_complex_index
    sets = [_block_stats(net, b).complexes for b in d.blocks]
    if z is not None:
        sets = [c - {z} for c in sets]
    return _pairwise_disjoint(sets)


# --------------------------------------------------------------------------
# structure theorems


def verify_C_structure(net: Network, d: Decomposition) -> bool:
    """Check that being a C-decomposition coincides with refining the linkage classes.

    Both sides are evaluated independently; returns whether they agree.
    """
    lhs = d.is_partition and is_c_decomposition(net, d)
    rhs = d.is_partition and is_refinement(linkage_decomposition(net), d)
    return lhs == rhs


def _zero_class_reactions(net: Network, block: Sequence[int], zero: int) -> set[int]:
    """Reactions of ``block`` in the block's linkage class that contains the zero complex."""
    rxs = [net.reactions[j] for j in block]
    cx = sorted({rx.reactant for rx in rxs} | {rx.product for rx in rxs})
    if zero not in cx:
        return set()
    local = {c: i for i, c in enumerate(cx)}
    comps = connected_components(len(cx), [(local[rx.reactant], local[rx.product]) for rx in rxs])
    zcomp = next(set(cx[i] for i in comp) for comp in comps if local[zero] in comp)
    return {j for j in block if net.reactions[j].reactant in zcomp}


def verify_Cstar_structure(net: Network, d: Decomposition) -> tuple[bool, int]:
    """Check the structure of a C*-decomposition and the zero-complex count identity.

    Verifies that (i) the zero-containing linkage classes of the blocks split
    the network's zero linkage class into pieces with disjoint nonzero
    complexes, (ii) what remains of the blocks is a C-decomposition of the
    rest of the network, and (iii) ``sum(l_i) - l == k0 - 1`` when ``k0 > 0``.
    Returns ``(all_checks_pass, k0)``.
    """
    if not d.is_partition or not is_c_star_decomposition(net, d):
        raise DecompositionError("not a C*-decomposition")
    z = net.zero_complex_index
    if z is None:
        return verify_C_structure(net, d) and is_c_decomposition(net, d), 0

    stats = [_block_stats(net, b) for b in d.blocks]
    k0 = sum(b.has_zero for b in stats)
    lc_reactions = linkage_class_reactions(net)
    l = len(lc_reactions)
    l0 = next(set(b) for b in lc_reactions if z in {net.reactions[j].reactant for j in b} | {net.reactions[j].product for j in b})

    zero_parts = [_zero_class_reactions(net, b, z) for b in d.blocks]
    pieces = [p for p in zero_parts if p]
    ok_i = sum(len(p) for p in pieces) == len(l0) and set().union(*pieces) == l0
    if ok_i:
        nonzero = []
        for p in pieces:
            nonzero.append(frozenset({net.reactions[j].reactant for j in p} | {net.reactions[j].product for j in p}) - {z})
        ok_i = _pairwise_disjoint(nonzero)

    rests = [tuple(sorted(set(b) - p)) for b, p in zip(d.blocks, zero_parts)]
    rests = [r for r in rests if r]
    outside = set(range(net.r)) - l0
    ok_ii = set().union(*map(set, rests)) == outside if rests else not outside
    if ok_ii and rests:
        ok_ii = _pairwise_disjoint([_block_stats(net, r).complexes for r in rests])

    ok_iii = sum(b.l for b in stats) - l == k0 - 1
    return ok_i and ok_ii and ok_iii, k0


# --------------------------------------------------------------------------
# canonical decompositions


def s_decomposition(net: Network) -> tuple[Decomposition, frozenset[int]]:
    """Split reactions into S-reactions and the rest.

    Returns the decomposition (S-reaction block first; empty blocks omitted)
    and the set of S-complex indices.
    """
    sc = s_complexes(net)
    inside, outside = [], []
    for j, rx in enumerate(net.reactions):
        a, b = rx.reactant in sc, rx.product in sc
        if a != b:
            raise LemmaViolation(f"reaction {net.format_reaction(j)} has exactly one S-complex endpoint")
        (inside if a else outside).append(j)
    blocks = tuple(tuple(b) for b in (inside, outside) if b)
    return Decomposition(blocks, net.r), sc


def s_reactions(net: Network) -> list[int]:
    sc = s_complexes(net)
    return [j for j, rx in enumerate(net.reactions) if rx.reactant in sc]


def orientation(net: Network) -> list[int]:
    """All irreversible reactions plus the lower-indexed member of each reversible pair."""
    partner = net.reversible_partner()
    return [j for j in range(net.r) if partner[j] is None or j < partner[j]]


def finest_independent_decomposition(net: Network) -> Decomposition:
    """Fundamental decomposition from the kernel coordinate graph.

    Reactions of the orientation are joined when they share the support of a
    null-space basis vector of the oriented reaction-vector matrix; each
    omitted reverse reaction joins its partner's block. The kernel basis is
    taken in fundamental-circuit form, so the components are the connected
    components of the column matroid and the result is the finest
    independent decomposition.
    """
    orient = orientation(net)
    rv = net.reaction_vectors()
    cols = [rv[j] for j in orient]
    rows = [[c[i] for c in cols] for i in range(net.m)]
    edges = []
    for v in kernel_basis(rows):
        support = [k for k, x in enumerate(v) if x != 0]
        edges.extend((support[0], k) for k in support[1:])
    comps = connected_components(len(orient), edges)
    where = {}
    for b, comp in enumerate(comps):
        for k in comp:
            where[orient[k]] = b
    partner = net.reversible_partner()
    blocks: list[list[int]] = [[] for _ in comps]
    for j in range(net.r):
        b = where[j] if j in where else where[partner[j]]
        blocks[b].append(j)
    blocks.sort(key=lambda b: b[0])
    return Decomposition(tuple(tuple(b) for b in blocks), net.r)
