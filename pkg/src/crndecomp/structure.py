"""Graph-theoretic and deficiency analysis of a single network."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .exactla import member, span_rank
from .model import Network


def connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Components of an undirected graph on 0..n-1, each sorted, ordered by smallest node."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


def strongly_connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components sorted and ordered by smallest node."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return sorted(comps, key=lambda c: c[0])


def terminal_components(comps: Sequence[Sequence[int]], edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Sinks of the condensation: components with no edge leaving them."""
    where = {}
    for k, comp in enumerate(comps):
        for v in comp:
            where[v] = k
    leaves = [False] * len(comps)
    for a, b in edges:
        if where[a] != where[b]:
            leaves[where[a]] = True
    return [list(c) for k, c in enumerate(comps) if not leaves[k]]


def _edges(net: Network) -> list[tuple[int, int]]:
    return [(rx.reactant, rx.product) for rx in net.reactions]


def linkage_classes(net: Network) -> list[list[int]]:
    """Connected components of the undirected reaction graph, as complex indices."""
    return connected_components(net.n, _edges(net))


def linkage_class_reactions(net: Network) -> list[list[int]]:
    """Reaction indices of each linkage class, aligned with :func:`linkage_classes`."""
    classes = linkage_classes(net)
    where = {v: k for k, cls in enumerate(classes) for v in cls}
    blocks: list[list[int]] = [[] for _ in classes]
    for j, rx in enumerate(net.reactions):
        blocks[where[rx.reactant]].append(j)
    return blocks


def strong_and_terminal_classes(net: Network) -> tuple[list[list[int]], list[list[int]]]:
    edges = _edges(net)
    strong = strongly_connected_components(net.n, edges)
    return strong, terminal_components(strong, edges)


def s_complexes(net: Network) -> frozenset[int]:
    """Indices of complexes that lie in the stoichiometric subspace."""
    rv = net.reaction_vectors()
    return frozenset(i for i in range(net.n) if member(net.complex_vector(i), rv))


NETWORK_CLASSES = ("SRS", "RSS", "TRS", "NRN")


@dataclass(frozen=True)
class StructuralReport:
    n: int
    n_r: int
    l: int
    sl: int
    t: int
    s: int
    q: int
    delta: int
    delta_p: int
    weakly_reversible: bool
    t_minimal: bool
    linkage_classes: list[list[int]]
    strong_classes: list[list[int]]
    terminal_strong_classes: list[list[int]]
    per_linkage_deficiency: list[int]
    network_class: str
    network_subclass: str | None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def analyze(net: Network) -> StructuralReport:
    """Counts, ranks, deficiencies and the R/S network class of ``net``.

    The class is decided from ``c = dim Im Y`` (the span of all complexes):
    SRS when ``c == s``, RSS when ``c == q``, TRS when ``c == q + s`` with
    ``R + S`` direct, NRN otherwise. RSS networks are tagged RES when every
    reaction joins two S-complexes and RSP otherwise.
    """
    m = net.m
    classes = linkage_classes(net)
    strong, terminal = strong_and_terminal_classes(net)
    rv = net.reaction_vectors()
    s = span_rank(rv, m)
    reactant_ids = sorted({rx.reactant for rx in net.reactions})
    reactants = [net.complex_vector(i) for i in reactant_ids]
    q = span_rank(reactants, m)
    c = span_rank([net.complex_vector(i) for i in range(net.n)], m)
    n, l = net.n, len(classes)

    where = {v: k for k, cls in enumerate(classes) for v in cls}
    per_vectors: list[list] = [[] for _ in classes]
    for j, rx in enumerate(net.reactions):
        per_vectors[where[rx.reactant]].append(rv[j])
    per_def = [len(cls) - 1 - span_rank(vs, m) for cls, vs in zip(classes, per_vectors)]

    subclass = None
    if c == s:
        klass = "SRS"
    elif c == q:
        klass = "RSS"
        sc = s_complexes(net)
        subclass = "RES" if len(sc) == n else "RSP"
    elif c == q + s and span_rank(reactants + rv, m) == q + s:
        klass = "TRS"
    else:
        klass = "NRN"

    return StructuralReport(
        n=n,
        n_r=len(reactant_ids),
        l=l,
        sl=len(strong),
        t=len(terminal),
        s=s,
        q=q,
        delta=n - l - s,
        delta_p=len(reactant_ids) - q,
        weakly_reversible=len(strong) == l,
        t_minimal=len(terminal) == l,
        linkage_classes=classes,
        strong_classes=strong,
        terminal_strong_classes=terminal,
        per_linkage_deficiency=per_def,
        network_class=klass,
        network_subclass=subclass,
    )
