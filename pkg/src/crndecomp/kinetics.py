"""Power-law kinetics, equilibrium search and numerical checks of the
decomposition theorems for positive and complex balanced equilibria.

Everything here is floating point. Exact structure comes from
:mod:`crndecomp.model`; this module converts it to numpy once per network.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .decomposition import Decomposition, classify
from .model import Network, incidence_matrix, map_of_complexes, stoichiometric_matrix
from .structure import analyze

DEFAULT_TOL = 1e-9
MAX_ITER = 200
START_SPREAD = 3.0


@dataclass(frozen=True)
class PowerLawKinetics:
    """Rate constant and kinetic-order row per reaction.

    ``K_j(x) = rate_j * prod_s x_s ** orders[j, s]``.
    """

    rates: np.ndarray
    orders: np.ndarray

    def __post_init__(self):
        rates = np.asarray(self.rates, dtype=float).reshape(-1)
        orders = np.asarray(self.orders, dtype=float)
        if orders.ndim != 2 or orders.shape[0] != rates.shape[0]:
            raise ValueError(f"orders must be (r, m) with r={rates.shape[0]}, got {orders.shape}")
        if np.any(~np.isfinite(rates)) or np.any(rates <= 0):
            raise ValueError("rate constants must be positive and finite")
        if np.any(~np.isfinite(orders)):
            raise ValueError("kinetic orders must be finite")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "orders", orders)

    @classmethod
    def mass_action(cls, net: Network, rates: Sequence[float] | None = None) -> PowerLawKinetics:
        """Orders taken from reactant stoichiometry; unit rates by default."""
        orders = np.array(
            [[float(x) for x in net.complex_vector(rx.reactant)] for rx in net.reactions], dtype=float
        ).reshape(net.r, net.m)
        rates = np.ones(net.r) if rates is None else np.asarray(rates, dtype=float)
        return cls(rates, orders)

    @property
    def r(self) -> int:
        return self.rates.shape[0]

    @property
    def m(self) -> int:
        return self.orders.shape[1]

    def restrict(self, block: Sequence[int]) -> PowerLawKinetics:
        """Literal projection onto the reactions of ``block``."""
        idx = list(block)
        return PowerLawKinetics(self.rates[idx], self.orders[idx])

    def to_dict(self) -> dict:
        return {"rates": self.rates.tolist(), "orders": self.orders.tolist()}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping, net: Network | None = None) -> PowerLawKinetics:
        if data.get("mass_action"):
            if net is None:
                raise ValueError("mass-action kinetics need the network")
            return cls.mass_action(net, data.get("rates"))
        return cls(data["rates"], data["orders"])

    @classmethod
    def from_json(cls, text: str, net: Network | None = None) -> PowerLawKinetics:
        return cls.from_dict(json.loads(text), net)


class _Arrays:
    """Float copies of the structural matrices of a network."""

    def __init__(self, net: Network):
        self.N = stoichiometric_matrix(net).to_float()
        self.Ia = incidence_matrix(net).to_float()
        self.Y = map_of_complexes(net).to_float()
        self.m, self.n, self.r = net.m, net.n, net.r


def _check(net: Network, kin: PowerLawKinetics) -> None:
    if kin.r != net.r or kin.m != net.m:
        raise ValueError(f"kinetics shape (r={kin.r}, m={kin.m}) does not match network (r={net.r}, m={net.m})")


def _log_rates(kin: PowerLawKinetics, u: np.ndarray) -> np.ndarray:
    return np.log(kin.rates) + kin.orders @ u


def evaluate(net: Network, kin: PowerLawKinetics, x: Sequence[float]):
    """Return ``(K(x), f(x), I_a K(x))`` at a strictly positive state."""
    _check(net, kin)
    x = np.asarray(x, dtype=float)
    if x.shape != (net.m,):
        raise ValueError(f"state must have length {net.m}")
    if np.any(x <= 0):
        raise ValueError("state must be strictly positive")
    arr = _Arrays(net)
    K = np.exp(_log_rates(kin, np.log(x)))
    return K, arr.N @ K, arr.Ia @ K


# --------------------------------------------------------------------------
# damped Gauss-Newton in log coordinates

Residual = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


def _residual(kin: PowerLawKinetics, rows: np.ndarray) -> Residual:
    """G(u) = rows @ K / sum(K) with K = K(e^u), and its Jacobian.

    Dividing by ``sum(K)`` keeps the zeros in the interior but stops the
    least-squares iteration from sliding to the boundary, where the raw
    residual vanishes only because every flux does. ``fn.rows`` keeps the
    unscaled rows for acceptance tests.
    """

    def fn(u: np.ndarray):
        K = np.exp(_log_rates(kin, u))
        S = K.sum()
        dK = K[:, None] * kin.orders
        F = rows @ K
        return F / S, (rows @ dK) / S - np.outer(F, K @ kin.orders) / S**2

    fn.rows = rows
    return fn


def newton(fn: Residual, u0: np.ndarray, max_iter: int = MAX_ITER, target: float = 0.0, max_step: float = 5.0):
    """Minimise ``0.5 |F(u)|^2`` with least-squares Newton steps and Armijo backtracking.

    Stops at ``max|F| <= target``, after ``max_iter`` iterations, or when no
    step decreases the objective. Returns ``(u, F)``.
    """
    u = np.array(u0, dtype=float)
    F, J = fn(u)
    phi = 0.5 * F @ F
    for _ in range(max_iter):
        if np.max(np.abs(F), initial=0.0) <= target:
            break
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        norm = np.max(np.abs(step), initial=0.0)
        if not np.isfinite(norm) or norm == 0.0:
            break
        if norm > max_step:
            step *= max_step / norm
        slope = -(J @ step) @ (J @ step)
        t = 1.0
        accepted = False
        while t > 1e-12:
            u_new = u + t * step
            with np.errstate(over="ignore", invalid="ignore"):
                F_new, J_new = fn(u_new)
            if np.all(np.isfinite(F_new)):
                phi_new = 0.5 * F_new @ F_new
                if phi_new <= phi + 1e-4 * t * slope or phi_new < phi:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            break
        u, F, J, phi = u_new, F_new, J_new, phi_new
    return u, F


@dataclass(frozen=True)
class EquilibriumWitness:
    x: np.ndarray
    residual_sfrf: float
    residual_cb: float
    is_cb: bool

    @property
    def u(self) -> np.ndarray:
        return np.log(self.x)

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "residual_sfrf": self.residual_sfrf,
            "residual_cb": self.residual_cb,
            "is_cb": self.is_cb,
        }


def _witness(arr: _Arrays, kin: PowerLawKinetics, u: np.ndarray, tol: float) -> EquilibriumWitness:
    K = np.exp(_log_rates(kin, u))
    cb = float(np.max(np.abs(arr.Ia @ K), initial=0.0))
    return EquilibriumWitness(np.exp(u), float(np.max(np.abs(arr.N @ K), initial=0.0)), cb, cb <= tol)


def _accept(F: np.ndarray, K: np.ndarray, tol: float) -> bool:
    # the relative test rejects drift towards the boundary, where K -> 0
    res = float(np.max(np.abs(F), initial=0.0))
    scale = float(np.max(K, initial=0.0))
    return bool(np.all(np.isfinite(F))) and res <= tol and res <= tol * scale


def _dedupe(us: list[np.ndarray], tol: float) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for u in sorted(us, key=lambda v: tuple(v)):
        if not any(np.max(np.abs(u - w)) <= tol for w in out):
            out.append(u)
    return out


def _starts(m: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-START_SPREAD, START_SPREAD, size=(count, m))


def _solve_many(fn: Residual, kin: PowerLawKinetics, starts, tol: float) -> list[np.ndarray]:
    found = []
    for u0 in starts:
        u, _ = newton(fn, u0, target=tol * 1e-4)
        K = np.exp(_log_rates(kin, u))
        if _accept(fn.rows @ K, K, tol):
            found.append(u)
    return found


def find_cb_equilibria(
    net: Network, kin: PowerLawKinetics, starts: int = 8, seed: int = 0, tol: float = DEFAULT_TOL
) -> list[EquilibriumWitness]:
    """Multistart search for complex balanced equilibria.

    Starts are drawn log-uniformly from ``[e^-3, e^3]^m``. A witness is kept
    when ``max|I_a K(x)| <= tol`` (absolutely and relative to ``max K(x)``);
    witnesses closer than ``tol`` in log space are merged.
    """
    _check(net, kin)
    if not analyze(net).weakly_reversible:
        warnings.warn("network is not weakly reversible; it has no complex balanced equilibria", stacklevel=2)
    arr = _Arrays(net)
    fn = _residual(kin, arr.Ia)
    us = _dedupe(_solve_many(fn, kin, _starts(net.m, starts, seed), tol), tol)
    return [_witness(arr, kin, u, tol) for u in us]


def find_equilibria(
    net: Network, kin: PowerLawKinetics, starts: int = 8, seed: int = 0, tol: float = DEFAULT_TOL
) -> list[EquilibriumWitness]:
    """Multistart search for positive equilibria (``f(x) = 0``)."""
    _check(net, kin)
    arr = _Arrays(net)
    fn = _residual(kin, arr.N)
    us = _dedupe(_solve_many(fn, kin, _starts(net.m, starts, seed), tol), tol)
    return [_witness(arr, kin, u, tol) for u in us]


# --------------------------------------------------------------------------
# theorem checks


@dataclass
class EquilibriaReport:
    independent: bool
    incidence_independent: bool
    is_C: bool
    weakly_reversible: bool
    tol: float
    whole_cb_witnesses: int = 0
    whole_cb_block_confirmations: int = 0
    whole_cb_block_failures: int = 0
    joint_cb_witnesses: int = 0
    joint_cb_inclusion_confirmations: int = 0
    whole_eq_witnesses: int = 0
    whole_eq_block_confirmations: int = 0
    whole_eq_block_failures: int = 0
    joint_eq_witnesses: int = 0
    joint_eq_inclusion_confirmations: int = 0
    block_cb_witnesses: list[int] = field(default_factory=list)
    converse_applicable: bool = False
    converse_confirmed: bool | None = None
    converse_probe: bool | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def _max_abs(v: np.ndarray) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def verify_equilibria_theorems(
    net: Network,
    kin: PowerLawKinetics,
    d: Decomposition,
    samples: int = 8,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    probe_converse: bool = False,
) -> EquilibriaReport:
    """Sample equilibria and check the decomposition theorems numerically.

    Always checked: every joint per-block CB witness (resp. equilibrium) is a
    CB witness (resp. equilibrium) of the whole network. For incidence
    independent decompositions every whole-network CB witness must be CB on
    each block; for independent ones every whole-network equilibrium must be
    an equilibrium of each block. For weakly reversible C-decompositions with
    a CB witness on every block, a whole-network CB witness must be found.
    ``probe_converse`` also tries the last check on other incidence
    independent decompositions, recording the outcome without asserting it.
    """
    _check(net, kin)
    cls = classify(net, d)
    wr = analyze(net).weakly_reversible
    rep = EquilibriaReport(cls.independent, cls.incidence_independent, cls.is_C, wr, tol)
    arr = _Arrays(net)
    k = d.k
    cb_blocks = []
    eq_blocks = []
    for b in d.blocks:
        mask = np.zeros(net.r)
        mask[list(b)] = 1.0
        cb_blocks.append(arr.Ia * mask)
        eq_blocks.append(arr.N * mask)
    starts = _starts(net.m, samples, seed)

    def block_res(blocks, u):
        K = np.exp(_log_rates(kin, u))
        return [_max_abs(B @ K) for B in blocks]

    # whole-network CB witnesses against each block
    whole_cb = _dedupe(_solve_many(_residual(kin, arr.Ia), kin, starts, tol), tol) if wr else []
    rep.whole_cb_witnesses = len(whole_cb)
    for u in whole_cb:
        res = block_res(cb_blocks, u)
        if all(x <= tol for x in res):
            rep.whole_cb_block_confirmations += 1
        else:
            rep.whole_cb_block_failures += 1
            if cls.incidence_independent:
                rep.violations.append(f"CB witness at u={u.tolist()} has block residuals {res}")

    # joint per-block CB witnesses are whole-network CB
    joint_cb = _solve_many(_residual(kin, np.vstack(cb_blocks)), kin, starts, tol)
    rep.joint_cb_witnesses = len(joint_cb)
    for u in joint_cb:
        whole = _max_abs(arr.Ia @ np.exp(_log_rates(kin, u)))
        if whole <= k * tol:
            rep.joint_cb_inclusion_confirmations += 1
        else:
            rep.violations.append(f"joint CB witness at u={u.tolist()} has whole residual {whole}")

    # positive equilibria, whole against blocks
    whole_eq = _dedupe(_solve_many(_residual(kin, arr.N), kin, starts, tol), tol)
    rep.whole_eq_witnesses = len(whole_eq)
    for u in whole_eq:
        res = block_res(eq_blocks, u)
        if all(x <= tol for x in res):
            rep.whole_eq_block_confirmations += 1
        else:
            rep.whole_eq_block_failures += 1
            if cls.independent:
                rep.violations.append(f"equilibrium at u={u.tolist()} has block residuals {res}")

    joint_eq = _solve_many(_residual(kin, np.vstack(eq_blocks)), kin, starts, tol)
    rep.joint_eq_witnesses = len(joint_eq)
    for u in joint_eq:
        whole = _max_abs(arr.N @ np.exp(_log_rates(kin, u)))
        if whole <= k * tol:
            rep.joint_eq_inclusion_confirmations += 1
        else:
            rep.violations.append(f"joint equilibrium at u={u.tolist()} has whole residual {whole}")

    # existence: per-block CB witnesses imply a whole-network CB witness
    rep.converse_applicable = bool(cls.is_C and wr)
    if rep.converse_applicable or (probe_converse and cls.incidence_independent):
        per_block = [_solve_many(_residual(kin, B), kin, starts, tol) for B in cb_blocks]
        rep.block_cb_witnesses = [len(w) for w in per_block]
        if all(per_block):
            found = bool(whole_cb)
            if not found:
                seeds = [w[0] for w in per_block] + [np.mean([w[0] for w in per_block], axis=0)]
                found = bool(_solve_many(_residual(kin, arr.Ia), kin, seeds, tol))
            if rep.converse_applicable:
                rep.converse_confirmed = found
                if not found:
                    rep.violations.append("every block has a CB witness but none was found for the whole network")
            else:
                rep.converse_probe = found
    return rep


def ode_terms(net: Network, kin: PowerLawKinetics, tol: float = 0.0) -> list[dict[tuple[float, ...], float]]:
    """Species formation rates as monomial dictionaries.

    Entry ``s`` maps each kinetic-order row to the summed coefficient
    ``rate_j * (y'_j - y_j)_s`` over reactions with that row; terms whose
    coefficient is at most ``tol`` in magnitude are dropped.
    """
    _check(net, kin)
    N = stoichiometric_matrix(net)
    out: list[dict[tuple[float, ...], float]] = [{} for _ in range(net.m)]
    for j in range(net.r):
        key = tuple(float(x) for x in kin.orders[j])
        for s in range(net.m):
            c = N[s, j]
            if c:
                out[s][key] = out[s].get(key, 0.0) + float(c) * float(kin.rates[j])
    return [{k: v for k, v in d.items() if abs(v) > tol} for d in out]
