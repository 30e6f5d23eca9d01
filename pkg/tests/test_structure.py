import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crndecomp.generators import random_network, weakly_reversible_network
from crndecomp.model import parse_network
from crndecomp.structure import (
    analyze,
    connected_components,
    linkage_classes,
    s_complexes,
    strong_and_terminal_classes,
    strongly_connected_components,
    terminal_components,
)
from oracles import scc_oracle, terminal_oracle, weak_oracle


@st.composite
def digraphs(draw, max_nodes=8):
    n = draw(st.integers(1, max_nodes))
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return n, edges


def _sets(comps):
    return {frozenset(c) for c in comps}


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_graph_helpers_match_path_enumeration(graph):
    n, edges = graph
    strong = strongly_connected_components(n, edges)
    assert _sets(strong) == scc_oracle(n, edges)
    assert _sets(terminal_components(strong, edges)) == terminal_oracle(n, edges)
    assert _sets(connected_components(n, edges)) == weak_oracle(n, edges)


def test_long_path_is_iterative():
    n = 5000
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    assert len(strongly_connected_components(n, edges)) == 1


def test_chain_counts():
    net = parse_network("0 -> X\nX -> Y\nY -> Z\nZ -> 0")
    rep = analyze(net)
    assert (rep.n, rep.l, rep.s, rep.delta) == (4, 1, 3, 0)
    assert rep.weakly_reversible and rep.sl == 1 and rep.t == 1


def test_open_chain_is_not_weakly_reversible():
    rep = analyze(parse_network("A -> B\nB -> C"))
    assert (rep.sl, rep.t, rep.delta) == (3, 1, 0)
    assert not rep.weakly_reversible
    assert rep.t_minimal


def test_two_autocatalytic_steps():
    rep = analyze(parse_network("X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1"))
    assert (rep.n, rep.n_r, rep.l, rep.s, rep.q, rep.delta, rep.delta_p) == (4, 2, 2, 1, 2, 1, 0)
    assert rep.per_linkage_deficiency == [0, 0]


@pytest.mark.parametrize(
    "text, klass",
    [
        ("A -> B\nB -> A", "RSS"),
        ("0 -> A\nA -> 0", "SRS"),
        ("A -> 2 A", "SRS"),
        ("X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1", "RSS"),
        ("A + B -> 2 A", "TRS"),
    ],
)
def test_network_class(text, klass):
    assert analyze(parse_network(text)).network_class == klass


def test_s_complexes():
    net = parse_network("0 -> A\nA -> B\nB + C -> C")
    sc = s_complexes(net)
    names = {net.complexes[i].format() for i in sc}
    assert "0" in names and "A" in names and "B" in names
    assert "C" not in names


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_weakly_reversible_generator(seed):
    rng = random.Random(seed)
    net = weakly_reversible_network(rng, m=4, cycles=[rng.randint(2, 4) for _ in range(rng.randint(1, 3))])
    rep = analyze(net)
    assert rep.weakly_reversible
    strong, terminal = strong_and_terminal_classes(net)
    assert _sets(strong) == _sets(terminal) == _sets(linkage_classes(net))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_deficiency_nonnegative(seed):
    rep = analyze(random_network(seed, m=4, n_complexes=8))
    assert rep.delta >= 0
    assert all(d >= 0 for d in rep.per_linkage_deficiency)
    assert rep.delta >= sum(rep.per_linkage_deficiency)
