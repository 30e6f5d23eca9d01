"""Acceptance criteria, one test per criterion.

Each test emits a single ``criterion N: PASS|FAIL`` line, collected into an
``acceptance criteria`` section of the pytest summary, and enforces the
stated runtime budget. The module also runs standalone:
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from crndecomp.decomposition import (  # noqa: E402
    classify,
    coarsen,
    finest_independent_decomposition,
    linkage_decomposition,
)
from crndecomp.exactla import RationalMatrix, rank  # noqa: E402
from crndecomp.generators import (  # noqa: E402
    complex_balanced_mass_action,
    random_c_decomposition,
    random_cstar_decomposition,
    random_decomposition,
    random_grouping,
    random_network,
    random_ssystem,
    weakly_reversible_network,
)
from crndecomp.kinetics import PowerLawKinetics, verify_equilibria_theorems  # noqa: E402
from crndecomp.model import incidence_matrix, parse_network  # noqa: E402
from crndecomp.ssystem import RealizationSpec, SSystemModel, coverability, ode_matches, realize  # noqa: E402
from crndecomp.structure import analyze, strongly_connected_components, terminal_components  # noqa: E402
from oracles import minor_rank, scc_oracle, terminal_oracle  # noqa: E402

TOL = 1e-9
RESULTS: list[str] = []  # shown in the pytest terminal summary by conftest


def _report(number: int, title: str, ok: bool, elapsed: float, budget: float | None, detail: str = "") -> bool:
    within = budget is None or elapsed < budget
    passed = ok and within
    limit = f" (limit {budget:g} s)" if budget is not None else ""
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {title} [{elapsed:.2f} s{limit}]"
    if detail:
        line += f" {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    return passed


# -- 1 ---------------------------------------------------------------------


def check_two_step_example() -> bool:
    t0 = time.perf_counter()
    net = parse_network("X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1")
    st = analyze(net)
    rep = classify(net, linkage_decomposition(net))
    finest = finest_independent_decomposition(net)
    block_deltas = [b["delta"] for b in rep.to_dict()["blocks"]]
    ok = (
        (st.n, st.l, st.s, st.delta) == (4, 2, 1, 1)
        and block_deltas == [0, 0]
        and rep.independent is False
        and rep.incidence_independent is True
        and finest.k == 1
    )
    detail = f"n={st.n} l={st.l} s={st.s} delta={st.delta} block_deltas={block_deltas} finest_k={finest.k}"
    return _report(1, "two-step autocatalytic example", ok, time.perf_counter() - t0, 1.0, detail)


# -- 2 ---------------------------------------------------------------------


def check_chain_covering() -> bool:
    t0 = time.perf_counter()
    model = SSystemModel.create(
        [1.0, 2.0, 3.0],
        [2.0, 3.0, 4.0],
        [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        names=["X", "Y", "Z"],
    )
    spec = RealizationSpec(
        kind="subnetwork",
        x_rho={"X": None, "Y": "X", "Z": "Y"},
        x_pi={"X": "Y", "Y": "Z", "Z": None},
        r_sets={"X": [], "Y": [], "Z": []},
        p_sets={"X": [], "Y": [], "Z": []},
    )
    real = realize(model, spec)
    target = parse_network("0 -> X\nX -> Y\nY -> Z\nZ -> 0")
    cov = real.species_covering()
    ok = (
        real.network.r == 4
        and real.network.same_sets(target)
        and cov.covering
        and not cov.is_partition
        and not real.is_decomposition
        and ode_matches(model, real)
    )
    detail = f"r={real.network.r} covering={dict(real.covering)} is_decomposition={real.is_decomposition}"
    return _report(2, "chain subnetwork realization", ok, time.perf_counter() - t0, None, detail)


# -- 3 ---------------------------------------------------------------------


def check_property_suite(count: int = 200) -> bool:
    t0 = time.perf_counter()
    violations: list[str] = []
    for seed in range(count):
        rng = random.Random(seed)
        net = random_network(
            rng,
            m=rng.randint(3, 6),
            n_complexes=rng.randint(3, 10),
            n_classes=rng.randint(1, 4),
            extra_edges=rng.randint(0, 3),
            zero_prob=0.5,
        )
        st = analyze(net)
        if rank(incidence_matrix(net)) != st.n - st.l:
            violations.append(f"{seed}:a")
        dc = random_c_decomposition(rng, net)
        rc = classify(net, dc)
        if not (rc.incidence_independent and rc.k <= st.l):
            violations.append(f"{seed}:b")
        ds = random_cstar_decomposition(rng, net)
        rs = classify(net, ds)
        if not rs.incidence_independent:
            violations.append(f"{seed}:c")
        if rs.k0 > 0 and sum(b["l"] for b in rs.to_dict()["blocks"]) - st.l != rs.k0 - 1:
            violations.append(f"{seed}:c-identity")
        for d in (dc, ds, random_decomposition(rng, net), finest_independent_decomposition(net), linkage_decomposition(net)):
            rep = classify(net, d)
            if rep.independent and not rep.delta <= rep.sum_delta:
                violations.append(f"{seed}:d-independent")
            if rep.incidence_independent and not rep.delta >= rep.sum_delta:
                violations.append(f"{seed}:d-incidence")
            coarse = classify(net, coarsen(d, random_grouping(rng, d.k)))
            if (rep.independent and not coarse.independent) or (
                rep.incidence_independent and not coarse.incidence_independent
            ):
                violations.append(f"{seed}:e")
    detail = f"networks={count} violations={len(violations)} {violations[:5] if violations else ''}".rstrip()
    return _report(3, "decomposition property suite", not violations, time.perf_counter() - t0, 30.0, detail)


# -- 4 ---------------------------------------------------------------------


def check_ssystem_suite(count: int = 100) -> bool:
    t0 = time.perf_counter()
    violations: list[str] = []
    for seed in range(count):
        rng = random.Random(10_000 + seed)
        model = random_ssystem(rng, m=rng.randint(1, 6))
        real = realize(model)
        net = real.network
        species_dec = real.species_covering()
        if not species_dec.is_partition or not classify(net, species_dec).independent:
            violations.append(f"{seed}:independent")
            continue
        rep = coverability(net)
        if not rep.species_decomposable or rep.decomposition(net).canonical() != species_dec.canonical():
            violations.append(f"{seed}:coverability")
        if not rep.delta <= net.m - rep.m_rev:
            violations.append(f"{seed}:bound")
        if rep.bi_independent and rep.delta != net.m - rep.m_rev:
            violations.append(f"{seed}:bound-equality")
        if finest_independent_decomposition(net).canonical() != species_dec.canonical():
            violations.append(f"{seed}:finest")
        if not ode_matches(model, real):
            violations.append(f"{seed}:ode")
    detail = f"models={count} violations={len(violations)} {violations[:5] if violations else ''}".rstrip()
    return _report(4, "S-system realization suite", not violations, time.perf_counter() - t0, 30.0, detail)


# -- 5 ---------------------------------------------------------------------


def check_equilibria(count: int = 20) -> bool:
    t0 = time.perf_counter()
    violations: list[str] = []
    witnesses = converse = 0
    for seed in range(count):
        rng = random.Random(20_000 + seed)
        net = weakly_reversible_network(
            rng, m=rng.randint(3, 5), cycles=[rng.randint(2, 4) for _ in range(rng.randint(1, 3))], zero_prob=0.4
        )
        rates, _ = complex_balanced_mass_action(net, rng)
        kin = PowerLawKinetics.mass_action(net, rates)
        d = random_c_decomposition(rng, net) if seed % 2 == 0 else random_cstar_decomposition(rng, net)
        if not classify(net, d).incidence_independent:
            violations.append(f"{seed}:not-incidence-independent")
            continue
        rep = verify_equilibria_theorems(net, kin, d, samples=6, seed=seed, tol=TOL, probe_converse=True)
        violations.extend(f"{seed}:{v}" for v in rep.violations)
        if rep.whole_cb_witnesses == 0:
            violations.append(f"{seed}:no-witness")
        if rep.whole_cb_block_failures:
            violations.append(f"{seed}:block-cb")
        if rep.joint_eq_inclusion_confirmations != rep.joint_eq_witnesses:
            violations.append(f"{seed}:joint-eq")
        if rep.is_C and all(rep.block_cb_witnesses):
            converse += 1
            if not rep.converse_confirmed:
                violations.append(f"{seed}:converse")
        witnesses += rep.whole_cb_witnesses
    detail = f"networks={count} whole_cb_witnesses={witnesses} converse_cases={converse} violations={len(violations)}"
    if violations:
        detail += f" {violations[:5]}"
    return _report(5, "complex balanced equilibria checks", not violations, time.perf_counter() - t0, 120.0, detail)


# -- 6 ---------------------------------------------------------------------


def check_oracles(count: int = 500) -> bool:
    t0 = time.perf_counter()
    disagreements = 0
    rng = random.Random(6)
    for _ in range(count):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        # low-rank products make singular matrices common
        if rng.random() < 0.5:
            k = rng.randint(1, min(r, c))
            A = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(r)]
            B = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(k)]
            rows = [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(c)] for i in range(r)]
        else:
            rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        if rank(RationalMatrix(rows)) != minor_rank(rows):
            disagreements += 1
    for _ in range(count):
        n = rng.randint(1, 8)
        p = rng.uniform(0.05, 0.5)
        edges = [(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < p]
        strong = strongly_connected_components(n, edges)
        if {frozenset(c) for c in strong} != scc_oracle(n, edges):
            disagreements += 1
        if {frozenset(c) for c in terminal_components(strong, edges)} != terminal_oracle(n, edges):
            disagreements += 1
    detail = f"matrices={count} graphs={count} disagreements={disagreements}"
    return _report(6, "oracle equivalence", disagreements == 0, time.perf_counter() - t0, None, detail)


CHECKS = [
    check_two_step_example,
    check_chain_covering,
    check_property_suite,
    check_ssystem_suite,
    check_equilibria,
    check_oracles,
]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i + 1}" for i in range(len(CHECKS))])
def test_acceptance(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CHECKS]
    sys.exit(0 if all(results) else 1)
