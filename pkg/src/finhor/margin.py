"""Rate margin of a rate-tuple over a T-slot horizon.

The margin is found by repeatedly solving the drain problem on rescaled
initial queues until the minimum slot count equals T; the scale reached is
the margin. ``delta >= 1`` exactly when the rate-tuple is achievable.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BoundaryUndefinedError, DomainError
from .region import FrontierSet
from .solver import DrainSolution, Status, _as_problem, solve_drain

EPS_ALG = 1e-7
RHO_ZERO = 1e-12
ACHIEVABLE_TOL = 1e-9
DIRECTION_TOL = 1e-9


class Terminal(str, Enum):
    NODE_B = "NODE_B"
    NODE_D = "NODE_D"
    NODE_E = "NODE_E"


@dataclass
class Iteration:
    k: int
    node: str
    status: Status
    p_star: int | None
    frac_term: float
    expanded_nodes: int
    queue: tuple[float, ...]


@dataclass
class MarginResult:
    delta: float
    iterations: int
    achievable: bool
    terminal: Terminal
    history: list[Iteration] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "iterations": self.iterations,
            "achievable": self.achievable,
            "terminal": self.terminal.value,
        }


def check_rate(mu, n_pairs: int) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n_pairs,):
        raise DomainError(f"rate-tuple must have {n_pairs} components, got shape {mu.shape}")
    if not np.isfinite(mu).all() or (mu <= 0).any():
        raise DomainError(
            "every rate component must be positive; remove inactive pairs "
            "(zero target rate) from the scenario instead")
    return mu


def one_slot_margin(frontier: FrontierSet, mu) -> float:
    """max over frontier points f of min_n f[n] / mu[n]."""
    mu = check_rate(mu, frontier.rates.shape[1])
    if len(frontier) == 0:
        return 0.0
    return float((frontier.rates / mu[None, :]).min(axis=1).max())


def iteration_bound(result: MarginResult, horizon: int) -> int:
    """Upper bound on the iteration count implied by the first two solves."""
    first = result.history[0]
    if first.status is Status.SOLVED and first.p_star < horizon:
        return horizon - first.p_star + 1
    if first.status is Status.SOLVED:
        return 1
    if len(result.history) < 2 or result.history[1].status is not Status.SOLVED:
        return 2
    return horizon - result.history[1].p_star + 2


def rate_margin(scenario_or_problem, mu, T: int, *, solver=solve_drain,
                eps: float = EPS_ALG, max_iterations: int | None = None) -> MarginResult:
    """Rate margin of ``mu`` over ``T`` slots by iterative queue rescaling.

    Each iteration drains ``Q`` (bits) with the search cut at depth T:

    * fewer than T slots: scale ``Q`` by the p-slot margin, repeat that block
      ``T // p`` times and fill the remaining ``T % p`` slots with the
      one-slot margin; when that cannot grow ``Q`` (single block, zero
      one-slot margin) nudge it just past the p-slot boundary instead;
    * more than T slots: restart from the one-slot margin, or stop with
      margin 0 if that already failed, or step back from the last nudge;
    * exactly T slots: scale by the T-slot margin and stop.
    """
    problem = _as_problem(scenario_or_problem)
    scenario = problem.scenario
    if T < 1:
        raise DomainError("horizon T must be at least 1")
    mu = check_rate(mu, scenario.n_pairs)
    L = scenario.blocklength
    rho = one_slot_margin(problem.frontier, mu)
    if rho < RHO_ZERO:
        rho = 0.0
    if max_iterations is None:
        max_iterations = 4 * T + 8

    q_first = T * mu * L
    q = q_first.copy()
    flag = 0
    nudge = None
    history: list[Iteration] = []
    terminal = None
    while terminal is None:
        k = len(history) + 1
        if k > max_iterations:
            raise RuntimeError(f"rate margin did not settle within {max_iterations} iterations")
        sol: DrainSolution = solver(problem, q, T)
        if sol.status is Status.EMPTY_START:
            raise RuntimeError("drain problem received empty queues for a positive rate-tuple")
        q_solved = q
        if sol.status is Status.SOLVED and sol.p_star < T:
            blocks, rest = divmod(T, sol.p_star)
            boundary = q * (1.0 / sol.frac_term)
            if blocks == 1 and rho == 0.0:
                # Push past the p-slot boundary by eps (rate units, over T
                # slots) on the binding pair, along the direction of mu.
                served = np.asarray(sol.served)
                binding = int(np.argmax(np.where(served > 0, q / np.where(served > 0, served, 1.0), 0.0)))
                nudge = eps * T * L * mu / mu[binding]
                q = boundary + nudge
                node = "a_middle"
            else:
                q = boundary * blocks + rest * rho * mu * L
                nudge = None
                node = "a"
            flag = 1
        elif sol.status is Status.SOLVED:
            q = q * (1.0 / sol.frac_term)
            node, terminal = "e", Terminal.NODE_E
        elif flag == -1:
            q = np.zeros_like(q)
            node, terminal = "b", Terminal.NODE_B
        elif flag == 0:
            q = T * max(rho, eps) * mu * L
            flag = -1
            node = "c"
        else:
            # Only reachable after a plain node a through rounding; step back along mu.
            q = q - (nudge if nudge is not None else eps * T * L * mu / mu.max())
            node, terminal = "d", Terminal.NODE_D
        history.append(Iteration(k, node, sol.status, sol.p_star, sol.frac_term,
                                 sol.expanded_nodes, tuple(map(float, q_solved))))

    delta = float(q[0] / q_first[0])
    ratios = q / q_first
    if terminal is not Terminal.NODE_B and np.ptp(ratios) > DIRECTION_TOL * max(1.0, delta):
        warnings.warn(f"rate margin drifted off the direction of mu: ratios {ratios}",
                      RuntimeWarning, stacklevel=2)
    return MarginResult(delta=delta, iterations=len(history),
                        achievable=delta >= 1.0 - ACHIEVABLE_TOL,
                        terminal=terminal, history=history)


def is_achievable(scenario_or_problem, mu, T: int) -> bool:
    """True iff the first drain of ``T * mu * L`` finishes within T slots."""
    problem = _as_problem(scenario_or_problem)
    mu = check_rate(mu, problem.scenario.n_pairs)
    if T < 1:
        raise DomainError("horizon T must be at least 1")
    sol = solve_drain(problem, T * mu * problem.scenario.blocklength, T)
    return sol.status in (Status.SOLVED, Status.EMPTY_START)


def scale_to_boundary(scenario_or_problem, mu, T: int) -> tuple[float, ...]:
    """The rate-tuple ``delta * mu`` on the weak Pareto frontier."""
    problem = _as_problem(scenario_or_problem)
    res = rate_margin(problem, mu, T)
    if res.delta <= 0.0:
        raise BoundaryUndefinedError("rate margin is zero: no achievable point along this direction")
    return tuple(float(v) for v in res.delta * np.asarray(mu, dtype=float))
