"""Brute-force ground truth for small instances.

Everything here enumerates instead of searching: the T-slot region from all
action multisets, the rate margin straight from its max-min definition, and
the drain problem level by level over the complete action tree. None of it
touches the search code or its kernels.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError, InfeasiblePairError
from .numerics import interference_free_rates, max_rate_tuple
from .region import (DEFAULT_ENUM_CAP, TAU_DOM, enumerate_power_tuples, one_slot_frontier,
                     pareto_filter, weak_pareto_filter)
from .scenario import NetworkScenario
from .solver import QUEUE_TOL, DrainSolution, Status


def _actions(scenario: NetworkScenario, full: bool, cap: int):
    """(power tuples, per-slot capacities) of the refined set, or of every
    power tuple when ``full``."""
    if full:
        powers = enumerate_power_tuples(scenario, cap)
        rates = [max_rate_tuple(scenario, s) for s in powers]
        return [tuple(map(float, s)) for s in powers], np.array(rates, dtype=float)
    front = one_slot_frontier(scenario, cap)
    return [p.power for p in front.points], front.rates.copy()


def _check_cap(n_actions: int, depth: int, cap: int) -> None:
    if depth * math.log(max(n_actions, 1)) > math.log(cap) + 1e-12:
        raise CapacityError(f"{n_actions}^{depth} action sequences exceed the enumeration cap {cap}")


@dataclass
class HorizonFrontier:
    """Distinct T-slot average capacity tuples with frontier flags."""

    horizon: int
    points: np.ndarray
    sequences: list[tuple[int, ...]]
    actions: list[tuple[float, ...]]
    pareto: np.ndarray
    weak: np.ndarray

    @cached_property
    def rates(self) -> np.ndarray:
        return self.points[self.pareto]

    def power_sequence(self, i: int) -> list[tuple[float, ...]]:
        return [self.actions[a] for a in self.sequences[i]]

    def contains(self, mu, tol: float = TAU_DOM) -> bool:
        mu = np.asarray(mu, dtype=float)
        return bool((self.rates >= mu[None, :] - tol).all(axis=1).any())

    def margin(self, mu) -> float:
        mu = np.asarray(mu, dtype=float)
        if (mu <= 0).any():
            raise DomainError("every rate component must be positive")
        return float((self.rates / mu[None, :]).min(axis=1).max())


def enumerate_frontier(scenario: NetworkScenario, T: int, cap: int = DEFAULT_ENUM_CAP,
                       tol: float = TAU_DOM, full: bool = False) -> HorizonFrontier:
    """All T-slot average capacity tuples and their (weak) Pareto flags.

    The average does not depend on slot order, so each multiset of actions
    is visited once; the cap still applies to the number of ordered
    sequences.
    """
    if T < 1:
        raise DomainError("horizon T must be at least 1")
    powers, caps = _actions(scenario, full, cap)
    _check_cap(len(powers), T, cap)
    combos = np.array(list(itertools.combinations_with_replacement(range(len(powers)), T)),
                      dtype=np.int64).reshape(-1, T)
    avg = caps[combos].sum(axis=1) / T
    _, first = np.unique(np.round(avg, 12), axis=0, return_index=True)
    first = np.sort(first)
    points = avg[first]
    seqs = [tuple(int(a) for a in combos[i]) for i in first]
    pareto = np.zeros(len(points), dtype=bool)
    pareto[pareto_filter(points, tol)] = True
    weak = np.zeros(len(points), dtype=bool)
    weak[weak_pareto_filter(points, tol)] = True
    return HorizonFrontier(T, points, seqs, powers, pareto, weak)


def margin_by_enumeration(scenario: NetworkScenario, mu, T: int,
                          cap: int = DEFAULT_ENUM_CAP) -> float:
    """max over T-slot frontier points of min_n point[n] / mu[n]."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (scenario.n_pairs,) or (mu <= 0).any():
        raise DomainError("mu must have one positive component per pair")
    return enumerate_frontier(scenario, T, cap).margin(mu)


def _levels(caps, q_start, s_start, q0, tol_q, max_depth):
    """Yield (depth, queues, served, goal, frac) for every level of the full
    action tree below one state. Row i at depth k is the path whose actions
    are the base-|A| digits of i."""
    m, n = caps.shape
    q = q_start[None, :].copy()
    s = s_start[None, :].copy()
    active = q0 > 0.0
    for depth in range(1, max_depth + 1):
        q = (q[:, None, :] - caps[None, :, :]).reshape(-1, n)
        q[q <= tol_q] = 0.0
        s = (s[:, None, :] + caps[None, :, :]).reshape(-1, n)
        goal = (q == 0.0).all(axis=1)
        frac = np.full(len(q), np.inf)
        if goal.any():
            ratio = q0[active][None, :] / s[goal][:, active]
            frac[goal] = np.minimum(ratio.max(axis=1), 1.0)
        yield depth, q, s, goal, frac
        # Drained paths never continue; mark them so no descendant can win.
        q[goal] = np.inf


def _path(index: int, depth: int, m: int) -> list[int]:
    digits = []
    for _ in range(depth):
        index, a = divmod(index, m)
        digits.append(a)
    return digits[::-1]


def exhaustive_min_slots(scenario: NetworkScenario, q0, depth_cap: int,
                         cap: int = DEFAULT_ENUM_CAP, full: bool = False) -> DrainSolution:
    """Fewest slots to drain ``q0`` (bits), then smallest final-slot term,
    by visiting every action sequence of each length in turn."""
    if depth_cap < 1:
        raise DomainError("depth_cap must be at least 1")
    q0 = np.asarray(q0, dtype=float)
    L = scenario.blocklength
    tol_q = QUEUE_TOL * L
    if not (q0 > tol_q).any():
        return DrainSolution(Status.EMPTY_START, p_star=0, frac_term=0.0,
                             queue_trace=[tuple(q0)], served=(0.0,) * scenario.n_pairs)
    for n, r in enumerate(interference_free_rates(scenario)):
        if q0[n] > tol_q and r <= 0:
            raise InfeasiblePairError(n)
    powers, rates = _actions(scenario, full, cap)
    _check_cap(len(powers), depth_cap, cap)
    caps = rates * L
    visited = 0
    for depth, q, s, goal, frac in _levels(caps, q0, np.zeros_like(q0), q0, tol_q, depth_cap):
        visited += len(q)
        if goal.any():
            best = int(np.argmin(frac))
            actions = _path(best, depth, len(powers))
            trace = [tuple(map(float, q0))]
            cur = q0.copy()
            for a in actions:
                cur = cur - caps[a]
                cur[cur <= tol_q] = 0.0
                trace.append(tuple(map(float, cur)))
            return DrainSolution(Status.SOLVED, power_seq=[powers[a] for a in actions],
                                 action_seq=actions, p_star=depth, frac_term=float(frac[best]),
                                 queue_trace=trace, served=tuple(map(float, s[best])),
                                 expanded_nodes=visited, generated_nodes=visited)
    return DrainSolution(Status.EXCEEDS_HORIZON, expanded_nodes=visited, generated_nodes=visited)


def remaining_cost(scenario: NetworkScenario, q0, queue, served,
                   cap: int = DEFAULT_ENUM_CAP, full: bool = False) -> float:
    """Exact cost-to-go ``k - 1 + frac`` from a search state with queue
    ``queue`` and cumulative service ``served``, where k more slots drain it.

    0 for a drained state. The search depth is unbounded; the longest
    candidate is serving every pair alone in turn.
    """
    q0 = np.asarray(q0, dtype=float)
    queue = np.asarray(queue, dtype=float)
    served = np.asarray(served, dtype=float)
    L = scenario.blocklength
    tol_q = QUEUE_TOL * L
    if not (queue > tol_q).any():
        return 0.0
    powers, rates = _actions(scenario, full, cap)
    caps = rates * L
    best_solo = caps.max(axis=0)
    if ((queue > tol_q) & (best_solo <= 0)).any():
        return math.inf
    bound = int(sum(math.ceil(qn / c) for qn, c in zip(queue, best_solo) if qn > tol_q)) + 1
    total = 0
    for depth, q, s, goal, frac in _levels(caps, queue, served, q0, tol_q, bound):
        total += len(q)
        if total > cap:
            raise CapacityError(f"remaining-cost enumeration exceeded {cap} nodes")
        if goal.any():
            return depth - 1 + float(frac.min())
    raise AssertionError("serving pairs one at a time always drains within the bound")
