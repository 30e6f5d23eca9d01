"""Seeded random networks, decompositions and S-systems.

All generators take a :class:`random.Random` (or a seed) so that fixtures are
reproducible; none of them touch global random state.
"""
from __future__ import annotations

import random
from collections import deque
from typing import Sequence

import numpy as np

from .decomposition import Decomposition, coarsen, linkage_decomposition
from .model import Complex, Network
from .ssystem import SSystemModel
from .structure import connected_components, linkage_class_reactions

MAX_SPECIES = 20
MAX_REACTIONS = 60


class SizeError(ValueError):
    pass


def _rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def _check_size(m: int, r: int) -> None:
    if m > MAX_SPECIES or r > MAX_REACTIONS:
        raise SizeError(f"size exceeds desk-scale limits (m <= {MAX_SPECIES}, r <= {MAX_REACTIONS}): m={m}, r={r}")


def _names(m: int) -> list[str]:
    return [f"X{i + 1}" for i in range(m)]


def random_complexes(rng: random.Random, count: int, m: int, zero: bool = False, max_coef: int = 2) -> list[Complex]:
    """``count`` distinct complexes over ``m`` species (the zero complex first if requested)."""
    names = _names(m)
    out: list[Complex] = [Complex()] if zero else []
    seen = set(out)
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 10000:
            raise SizeError(f"cannot draw {count} distinct complexes over {m} species")
        size = rng.randint(1, min(3, m))
        picks = rng.sample(names, size)
        c = Complex([(s, rng.randint(1, max_coef)) for s in picks])
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def random_network(
    seed_or_rng,
    m: int = 4,
    n_complexes: int = 6,
    n_classes: int = 2,
    extra_edges: int = 2,
    zero_prob: float = 0.3,
    reverse_prob: float = 0.2,
) -> Network:
    """A random network with roughly ``n_classes`` linkage classes.

    Each class is a random tree on its complexes plus ``extra_edges`` chords
    spread over the classes; edges are reversed or doubled at random.
    """
    rng = _rng(seed_or_rng)
    n_classes = max(1, min(n_classes, n_complexes // 2))
    complexes = random_complexes(rng, n_complexes, m, zero=rng.random() < zero_prob)
    rng.shuffle(complexes)
    groups: list[list[int]] = [[] for _ in range(n_classes)]
    for i in range(n_complexes):
        g = i % n_classes if i < 2 * n_classes else rng.randrange(n_classes)
        groups[g].append(i)
    edges: set[tuple[int, int]] = set()

    def add(a: int, b: int) -> None:
        if a == b:
            return
        if rng.random() < 0.5:
            a, b = b, a
        edges.add((a, b))
        if rng.random() < reverse_prob:
            edges.add((b, a))

    for grp in groups:
        grp = grp[:]
        rng.shuffle(grp)
        for k in range(1, len(grp)):
            add(grp[k], grp[rng.randrange(k)])
    for _ in range(extra_edges):
        grp = rng.choice(groups)
        if len(grp) >= 2:
            a, b = rng.sample(grp, 2)
            add(a, b)
    pairs = sorted(edges)
    _check_size(m, len(pairs))
    return Network.from_reactions([(complexes[a], complexes[b]) for a, b in pairs])


def weakly_reversible_network(
    seed_or_rng, m: int = 4, cycles: Sequence[int] = (3, 3), chords: int = 1, zero_prob: float = 0.2
) -> Network:
    """Disjoint directed cycles (lengths ``cycles``) with chords inside each cycle."""
    rng = _rng(seed_or_rng)
    total = sum(cycles)
    if any(c < 2 for c in cycles):
        raise SizeError("cycles need at least two complexes")
    complexes = random_complexes(rng, total, m, zero=rng.random() < zero_prob)
    rng.shuffle(complexes)
    edges: list[tuple[int, int]] = []
    start = 0
    for length in cycles:
        ids = list(range(start, start + length))
        for k in range(length):
            edges.append((ids[k], ids[(k + 1) % length]))
        for _ in range(chords):
            a, b = rng.sample(ids, 2)
            if (a, b) not in edges:
                edges.append((a, b))
        start += length
    _check_size(m, len(edges))
    return Network.from_reactions([(complexes[a], complexes[b]) for a, b in edges])


def species_decomposable_network(seed_or_rng, m: int = 3, reversible_prob: float = 0.3, max_regulators: int = 2) -> Network:
    """A species decomposable network built from per-species reaction pairs.

    Each species ``X_i`` gets ``X_rho + R -> X_i + R`` and ``X_i + P -> X_rho + P``
    with ``X_rho`` the zero complex or an earlier species, so the pairs are
    rank one and their reaction vectors are independent.
    """
    rng = _rng(seed_or_rng)
    _check_size(m, 2 * m)
    names = _names(m)
    pairs = []
    for i, xi in enumerate(names):
        rho = None if i == 0 or rng.random() < 0.5 else names[rng.randrange(i)]
        R = rng.sample(names, rng.randint(0, min(max_regulators, m)))
        P = R if rng.random() < reversible_prob else rng.sample(names, rng.randint(0, min(max_regulators, m)))
        Rc = Complex([(s, 1) for s in R])
        Pc = Complex([(s, 1) for s in P])
        rc = Complex([(rho, 1)]) if rho else Complex()
        X = Complex([(xi, 1)])
        pairs.append((rc + Rc, X + Rc))
        pairs.append((X + Pc, rc + Pc))
    return Network.from_reactions(pairs, species=names)


# --------------------------------------------------------------------------
# decompositions


def random_grouping(rng: random.Random, k: int) -> list[list[int]]:
    """A random partition of ``range(k)``."""
    labels = [rng.randrange(max(1, k)) for _ in range(k)]
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def random_decomposition(seed_or_rng, net: Network, max_blocks: int = 4) -> Decomposition:
    rng = _rng(seed_or_rng)
    k = rng.randint(1, min(max_blocks, net.r))
    assign = list(range(k)) + [rng.randrange(k) for _ in range(net.r - k)]
    rng.shuffle(assign)
    blocks = [[j for j in range(net.r) if assign[j] == b] for b in range(k)]
    return Decomposition(tuple(tuple(b) for b in blocks), net.r)


def random_c_decomposition(seed_or_rng, net: Network) -> Decomposition:
    """A random coarsening of the linkage-class decomposition."""
    rng = _rng(seed_or_rng)
    lc = linkage_decomposition(net)
    return coarsen(lc, random_grouping(rng, lc.k))


def cstar_atoms(net: Network) -> list[list[int]]:
    """Finest C*-decomposition: linkage classes, with the zero class split at 0.

    Inside the linkage class of the zero complex, reactions are grouped by the
    connected components left after deleting the zero complex.
    """
    z = net.zero_complex_index
    blocks = linkage_class_reactions(net)
    if z is None:
        return blocks
    atoms = []
    for b in blocks:
        cx = {net.reactions[j].reactant for j in b} | {net.reactions[j].product for j in b}
        if z not in cx:
            atoms.append(b)
            continue
        nonzero = sorted(cx - {z})
        local = {c: i for i, c in enumerate(nonzero)}
        inner = [
            (local[net.reactions[j].reactant], local[net.reactions[j].product])
            for j in b
            if z not in (net.reactions[j].reactant, net.reactions[j].product)
        ]
        comps = connected_components(len(nonzero), inner)
        where = {nonzero[i]: k for k, comp in enumerate(comps) for i in comp}
        parts: list[list[int]] = [[] for _ in comps]
        for j in b:
            rx = net.reactions[j]
            end = rx.product if rx.reactant == z else rx.reactant
            parts[where[end]].append(j)
        atoms.extend(p for p in parts if p)
    return sorted(atoms, key=lambda a: a[0])


def random_cstar_decomposition(seed_or_rng, net: Network) -> Decomposition:
    rng = _rng(seed_or_rng)
    atoms = cstar_atoms(net)
    grouping = random_grouping(rng, len(atoms))
    return Decomposition(tuple(tuple(j for g in grp for j in atoms[g]) for grp in grouping), net.r)


def c_decomposed_network(seed_or_rng, m: int = 4, n_complexes: int = 8, n_classes: int = 3) -> tuple[Network, Decomposition]:
    rng = _rng(seed_or_rng)
    net = random_network(rng, m=m, n_complexes=n_complexes, n_classes=n_classes)
    return net, random_c_decomposition(rng, net)


# --------------------------------------------------------------------------
# kinetics and S-systems


def cycle_flux(net: Network, seed_or_rng) -> np.ndarray:
    """A strictly positive vector in the kernel of the incidence matrix.

    Needs a weakly reversible network: every reaction ``a -> b`` is closed
    into a cycle by a shortest path ``b -> a`` and the cycles are summed with
    random positive weights.
    """
    rng = _rng(seed_or_rng)
    out = [[] for _ in range(net.n)]
    for j, rx in enumerate(net.reactions):
        out[rx.reactant].append((rx.product, j))
    w = np.zeros(net.r)
    for j, rx in enumerate(net.reactions):
        prev: dict[int, tuple[int, int] | None] = {rx.product: None}
        queue = deque([rx.product])
        while queue and rx.reactant not in prev:
            v = queue.popleft()
            for u, jj in out[v]:
                if u not in prev:
                    prev[u] = (v, jj)
                    queue.append(u)
        if rx.reactant not in prev:
            raise ValueError("network is not weakly reversible")
        weight = rng.uniform(0.5, 2.0)
        w[j] += weight
        v = rx.reactant
        while prev[v] is not None:
            v, jj = prev[v]
            w[jj] += weight
    return w


def complex_balanced_mass_action(net: Network, seed_or_rng):
    """Mass-action rate constants for which a random state is complex balanced.

    Returns ``(rates, x_star)`` with ``rates_j = w_j / x_star ** y_j`` for a
    positive cycle flux ``w``.
    """
    rng = _rng(seed_or_rng)
    w = cycle_flux(net, rng)
    x = np.exp(np.array([rng.uniform(-1.0, 1.0) for _ in range(net.m)]))
    logx = np.log(x)
    rates = np.empty(net.r)
    for j, rx in enumerate(net.reactions):
        y = np.array([float(c) for c in net.complex_vector(rx.reactant)])
        rates[j] = w[j] / np.exp(y @ logx)
    return rates, x


def random_ssystem(seed_or_rng, m: int = 3, density: float = 0.4, independent_prob: float = 0.2) -> SSystemModel:
    """Random S-system with positive rate constants and sparse kinetic orders."""
    rng = _rng(seed_or_rng)
    _check_size(m, 2 * m)
    dependent = [rng.random() >= independent_prob for _ in range(m)]
    if not any(dependent):
        dependent[0] = True

    def orders():
        return [[round(rng.uniform(-1.5, 2.0), 3) if rng.random() < density else 0.0 for _ in range(m)] for _ in range(m)]

    alpha = [round(rng.uniform(0.2, 5.0), 4) for _ in range(m)]
    beta = [round(rng.uniform(0.2, 5.0), 4) for _ in range(m)]
    return SSystemModel.create(alpha, beta, orders(), orders(), dependent)
