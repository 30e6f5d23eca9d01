import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crndecomp.decomposition import (
    Decomposition,
    DecompositionError,
    classify,
    coarsen,
    discrete,
    finest_independent_decomposition,
    is_c_decomposition,
    is_c_star_decomposition,
    is_refinement,
    linkage_decomposition,
    s_decomposition,
    s_reactions,
    subnetwork,
    trivial,
    verify_C_structure,
    verify_Cstar_structure,
)
from crndecomp.generators import (
    random_c_decomposition,
    random_cstar_decomposition,
    random_decomposition,
    random_grouping,
    random_network,
)
from crndecomp.model import incidence_matrix, parse_network
from crndecomp.structure import analyze
from oracles import minor_rank

EXAMPLE = "X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1"


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def _oracle_s(net, block):
    rows = [list(net.reaction_vector(j)) for j in block]
    return minor_rank(rows)


def _oracle_independent(net, blocks):
    return _oracle_s(net, range(net.r)) == sum(_oracle_s(net, b) for b in blocks)


def _oracle_incidence_rank(net, block):
    Ia = incidence_matrix(net)
    return minor_rank([list(Ia.column(j)) for j in block])


def test_example_linkage_classes():
    net = parse_network(EXAMPLE)
    rep = classify(net, linkage_decomposition(net))
    assert [b["delta"] for b in rep.to_dict()["blocks"]] == [0, 0]
    assert rep.delta == 1 and rep.sum_delta == 0
    assert not rep.independent and rep.incidence_independent
    assert finest_independent_decomposition(net).k == 1


def test_decomposition_validation():
    with pytest.raises(DecompositionError):
        Decomposition(((0,),), 2)
    with pytest.raises(DecompositionError):
        Decomposition(((0, 1), (1,)), 2)
    cov = Decomposition(((0, 1), (1,)), 2, covering=True)
    assert not cov.is_partition
    with pytest.raises(DecompositionError):
        Decomposition(((0,), ()), 1)


def test_classify_rejects_covering():
    net = parse_network("A -> B\nB -> C")
    with pytest.raises(DecompositionError):
        classify(net, Decomposition(((0, 1), (1,)), 2, covering=True))


def test_labels_round_trip():
    net = parse_network("a: A -> B\nb: B -> C\nc: C -> A")
    d = Decomposition.from_keys(net, [["a", "c"], ["b"]])
    assert d.to_dict(net) == {"blocks": [["a", "c"], ["b"]]}
    assert Decomposition.from_dict(net, d.to_dict(net)) == d


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_classification_matches_rank_oracle(seed):
    rng = random.Random(seed)
    net = random_network(rng, m=3, n_complexes=rng.randint(3, 6), n_classes=rng.randint(1, 2))
    d = random_decomposition(rng, net)
    rep = classify(net, d)
    assert rep.independent == _oracle_independent(net, d.blocks)
    total = _oracle_incidence_rank(net, range(net.r))
    assert rep.incidence_independent == (total == sum(_oracle_incidence_rank(net, b) for b in d.blocks))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_finest_independent_against_brute_force(seed):
    rng = random.Random(seed)
    net = random_network(rng, m=3, n_complexes=rng.randint(3, 5), n_classes=1, extra_edges=rng.randint(0, 2))
    if net.r > 7:
        return
    finest = finest_independent_decomposition(net)
    assert _oracle_independent(net, finest.blocks)
    for part in _set_partitions(list(range(net.r))):
        if _oracle_independent(net, part):
            coarse = Decomposition(tuple(tuple(b) for b in part), net.r)
            assert is_refinement(finest, coarse)


def test_finest_keeps_reversible_pairs_together():
    net = parse_network("A <-> B\nC <-> D\nA + C -> 0")
    finest = finest_independent_decomposition(net)
    for b in finest.blocks:
        for j in b:
            p = net.reversible_partner()[j]
            assert p is None or p in b


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_c_decompositions(seed):
    rng = random.Random(seed)
    net = random_network(rng, m=4, n_complexes=rng.randint(4, 9), n_classes=rng.randint(1, 4))
    d = random_c_decomposition(rng, net)
    assert is_c_decomposition(net, d) and is_c_star_decomposition(net, d)
    assert verify_C_structure(net, d)
    rep = classify(net, d)
    assert rep.incidence_independent and rep.k <= analyze(net).l


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_cstar_decompositions(seed):
    rng = random.Random(seed)
    net = random_network(rng, m=4, n_complexes=rng.randint(4, 9), n_classes=rng.randint(1, 3), zero_prob=0.8)
    d = random_cstar_decomposition(rng, net)
    assert is_c_star_decomposition(net, d)
    ok, k0 = verify_Cstar_structure(net, d)
    assert ok
    rep = classify(net, d)
    assert rep.k0 == k0
    if k0 > 0:
        assert sum(b["l"] for b in rep.to_dict()["blocks"]) - analyze(net).l == k0 - 1


def test_cstar_split_at_zero():
    net = parse_network("0 -> A\nA -> 0\n0 -> B\nB -> C")
    d = Decomposition(((0, 1), (2, 3)), net.r)
    assert not is_c_decomposition(net, d)
    assert is_c_star_decomposition(net, d)
    ok, k0 = verify_Cstar_structure(net, d)
    assert ok and k0 == 2
    assert classify(net, d).incidence_independent


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_coarsening_preserves_independence(seed):
    rng = random.Random(seed)
    net = random_network(rng, m=4, n_complexes=rng.randint(4, 8))
    d = finest_independent_decomposition(net) if rng.random() < 0.5 else random_decomposition(rng, net)
    rep = classify(net, d)
    c = coarsen(d, random_grouping(rng, d.k))
    rc = classify(net, c)
    assert is_refinement(d, c)
    assert rc.independent or not rep.independent
    assert rc.incidence_independent or not rep.incidence_independent


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_deficiency_inequalities(seed):
    rng = random.Random(seed)
    net = random_network(rng, m=4, n_complexes=rng.randint(4, 8))
    for d in (random_decomposition(rng, net), linkage_decomposition(net), finest_independent_decomposition(net)):
        rep = classify(net, d)
        if rep.independent:
            assert rep.delta <= rep.sum_delta
        if rep.incidence_independent:
            assert rep.delta >= rep.sum_delta
        if rep.bi_independent:
            assert rep.delta == rep.sum_delta


def test_trivial_and_discrete():
    net = parse_network("A -> B\nB -> C\nC -> A")
    assert classify(net, trivial(net)).bi_independent
    rep = classify(net, discrete(net))
    assert not rep.independent and not rep.incidence_independent


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_s_decomposition(seed):
    net = random_network(seed, m=3, n_complexes=6, zero_prob=0.7)
    d, sc = s_decomposition(net)
    assert d.is_partition
    inside = set(s_reactions(net))
    for j, rx in enumerate(net.reactions):
        assert (j in inside) == (rx.reactant in sc and rx.product in sc)


def test_subnetwork_keeps_reactions():
    net = parse_network("A -> B\nB -> C\nC -> A")
    sub = subnetwork(net, [0, 2])
    assert sub.r == 2 and set(sub.species) == {"A", "B", "C"}
