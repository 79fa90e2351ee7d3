"""Minimum-slot queue draining over the refined power set.

Given initial queues ``q0`` (bits), find the power-tuple sequence that empties
every queue in the fewest slots and, among those, minimizes the final-slot
term ``max_n q0[n] / served[n]``. The search minimizes ``p - 1 + frac``:
every non-final slot costs 1 and the final slot costs ``frac``.
"""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError, InfeasiblePairError
from .numerics import interference_free_rates
from .region import FrontierSet, one_slot_frontier
from .scenario import NetworkScenario

DEFAULT_NODE_BUDGET = 10**7
QUEUE_TOL = 1e-9  # per unit of blocklength
PRUNE_TOL = 1e-12  # per unit of blocklength


class Status(str, Enum):
    SOLVED = "SOLVED"
    EXCEEDS_HORIZON = "EXCEEDS_HORIZON"
    EMPTY_START = "EMPTY_START"


@dataclass
class TraceRow:
    depth: int
    f: float
    g: float
    h: float
    queue: tuple[float, ...]
    served: tuple[float, ...]


@dataclass
class DrainSolution:
    status: Status
    power_seq: list[tuple[float, ...]] = field(default_factory=list)
    action_seq: list[int] = field(default_factory=list)
    p_star: int | None = None
    frac_term: float = 0.0
    queue_trace: list[tuple[float, ...]] = field(default_factory=list)
    served: tuple[float, ...] = ()
    expanded_nodes: int = 0
    generated_nodes: int = 0
    trace: list[TraceRow] | None = None

    @property
    def objective(self) -> float | None:
        """Optimal value of ``p - 1 + frac`` (None unless SOLVED)."""
        if self.status is not Status.SOLVED:
            return None
        return self.p_star - 1 + self.frac_term


def node_budget() -> int:
    value = os.environ.get("FINHOR_NODE_BUDGET")
    return int(value) if value else DEFAULT_NODE_BUDGET


class DrainProblem:
    """Per-scenario data shared by every solve: refined actions, their
    capacities in bits, and the interference-free heuristic scale."""

    def __init__(self, scenario: NetworkScenario, frontier: FrontierSet | None = None):
        self.scenario = scenario
        self.frontier = frontier if frontier is not None else one_slot_frontier(scenario)
        L = scenario.blocklength
        self.caps_bits = np.ascontiguousarray(self.frontier.rates * L)
        self.if_rates = interference_free_rates(scenario)
        with np.errstate(divide="ignore"):
            inv = np.where(self.if_rates > 0, 1.0 / (self.if_rates * L), 0.0)
        self.inv_if_bits = np.ascontiguousarray(inv)
        self.tol_q = QUEUE_TOL * L
        self.tol_prune = PRUNE_TOL * L

    def check_feasible(self, q) -> None:
        for n, (qn, r) in enumerate(zip(q, self.if_rates)):
            if qn > self.tol_q and r <= 0:
                raise InfeasiblePairError(n)

    def heuristic(self, q) -> float:
        q = np.asarray(q, dtype=float)
        if not (q > self.tol_q).any():
            return 0.0
        self.check_feasible(q)
        return float((q * self.inv_if_bits).max())


def heuristic(scenario: NetworkScenario, q) -> float:
    """Interference-free lower bound on the remaining drain cost of ``q``."""
    return DrainProblem(scenario).heuristic(q)


def _as_problem(scenario_or_problem) -> DrainProblem:
    if isinstance(scenario_or_problem, DrainProblem):
        return scenario_or_problem
    return DrainProblem(scenario_or_problem)


def _search(problem: DrainProblem, q0, depth_cap: int, informed: bool,
            budget: int | None, trace: bool, backend) -> DrainSolution:
    if depth_cap < 1:
        raise DomainError("depth_cap must be at least 1")
    q0 = np.asarray(q0, dtype=float)
    n = problem.scenario.n_pairs
    if q0.shape != (n,) or (q0 < 0).any() or not np.isfinite(q0).all():
        raise DomainError(f"q0 must be {n} finite non-negative values")
    if not (q0 > problem.tol_q).any():
        return DrainSolution(Status.EMPTY_START, p_star=0, frac_term=0.0,
                             queue_trace=[tuple(q0)], served=(0.0,) * n)
    problem.check_feasible(q0)
    expand = backend.expand
    prune = backend.prune_dominated
    budget = node_budget() if budget is None else budget

    caps = problem.caps_bits
    n_actions = len(caps)
    inv_if = problem.inv_if_bits if informed else np.zeros(n)
    tol_q, tol_p = problem.tol_q, problem.tol_prune

    cap_nodes = 1024
    queue_buf = np.empty((cap_nodes, n))
    served_buf = np.empty((cap_nodes, n))
    depth_buf = np.empty(cap_nodes, dtype=np.int64)
    alive = np.zeros(cap_nodes, dtype=np.uint8)
    goal_buf = np.zeros(cap_nodes, dtype=np.uint8)
    g_buf = np.empty(cap_nodes)
    frac_buf = np.zeros(cap_nodes)
    parent = np.empty(cap_nodes, dtype=np.int64)
    queue_buf[0] = q0
    served_buf[0] = 0.0
    depth_buf[0] = 0
    alive[0] = 1
    g_buf[0] = 0.0
    parent[0] = -1
    used = 1
    h0 = float((q0 * inv_if).max())
    # Ties on F go to the deeper node, then to the lexicographically smaller path.
    fringe = [(h0, 0, (), 0)]
    expanded = 0
    rows = [] if trace else None

    while fringe:
        f, negdepth, path, idx = heapq.heappop(fringe)
        if not alive[idx]:
            continue
        alive[idx] = 0
        depth = -negdepth
        if idx:
            expanded += 1
        if rows is not None:
            rows.append(TraceRow(depth, f, float(g_buf[idx]), f - float(g_buf[idx]),
                                 tuple(queue_buf[idx]), tuple(served_buf[idx])))
        if goal_buf[idx]:
            return _finish(problem, q0, idx, path, float(frac_buf[idx]),
                           queue_buf, served_buf, parent, expanded, used, rows)
        if depth >= depth_cap:
            continue
        if informed:
            prune(served_buf, depth_buf, alive, used, served_buf[idx], depth, tol_p)
        child_q, child_s, h, goal, frac = expand(
            queue_buf[idx], served_buf[idx], caps, inv_if, q0, tol_q)
        if used + n_actions > budget:
            raise CapacityError(f"search exceeded the node budget of {budget}")
        if used + n_actions > cap_nodes:
            grow = max(cap_nodes * 2, used + n_actions)
            queue_buf = _grow(queue_buf, grow)
            served_buf = _grow(served_buf, grow)
            depth_buf = _grow(depth_buf, grow)
            alive = _grow(alive, grow)
            goal_buf = _grow(goal_buf, grow)
            g_buf = _grow(g_buf, grow)
            frac_buf = _grow(frac_buf, grow)
            parent = _grow(parent, grow)
            cap_nodes = grow
        sl = slice(used, used + n_actions)
        queue_buf[sl] = child_q
        served_buf[sl] = child_s
        depth_buf[sl] = depth + 1
        alive[sl] = 1
        goal_buf[sl] = goal
        parent[sl] = idx
        g = np.where(goal != 0, depth + frac, depth + 1.0)
        g_buf[sl] = g
        frac_buf[sl] = frac
        fvals = g + h
        nd = -(depth + 1)
        for a in range(n_actions):
            heapq.heappush(fringe, (float(fvals[a]), nd, path + (a,), used + a))
        used += n_actions

    sol = DrainSolution(Status.EXCEEDS_HORIZON, expanded_nodes=expanded, generated_nodes=used - 1)
    sol.trace = rows
    return sol


def _grow(arr, size):
    out = np.zeros((size,) + arr.shape[1:], dtype=arr.dtype)
    out[:len(arr)] = arr
    return out


def _finish(problem, q0, idx, path, frac, queue_buf, served_buf, parent, expanded, used, rows):
    chain = []
    j = idx
    while j >= 0:
        chain.append(j)
        j = parent[j]
    chain.reverse()
    powers = [problem.frontier.points[a].power for a in path]
    return DrainSolution(
        status=Status.SOLVED,
        power_seq=powers,
        action_seq=list(path),
        p_star=len(path),
        frac_term=min(1.0, frac),
        queue_trace=[tuple(map(float, queue_buf[j])) for j in chain],
        served=tuple(map(float, served_buf[idx])),
        expanded_nodes=expanded,
        generated_nodes=used - 1,
        trace=rows,
    )


def solve_drain(scenario_or_problem, q0, depth_cap: int, *, budget: int | None = None,
                trace: bool = False, backend=None) -> DrainSolution:
    """A* search with the interference-free heuristic and both pruning rules.

    Nodes that reach ``depth_cap`` with queues left are discarded, so a result
    of EXCEEDS_HORIZON means no sequence of at most ``depth_cap`` slots drains
    ``q0``.
    """
    problem = _as_problem(scenario_or_problem)
    return _search(problem, q0, depth_cap, True, budget, trace, backend or kernels)


def solve_drain_uninformed(scenario_or_problem, q0, depth_cap: int, *,
                           budget: int | None = None, trace: bool = False,
                           backend=None) -> DrainSolution:
    """Uniform-cost baseline: zero heuristic and no dominance pruning."""
    problem = _as_problem(scenario_or_problem)
    return _search(problem, q0, depth_cap, False, budget, trace, backend or kernels)


def replay(problem: DrainProblem, q0, actions) -> list[tuple[float, ...]]:
    """Queue trajectory of an action sequence under the clipped recursion."""
    q = np.asarray(q0, dtype=float).copy()
    out = [tuple(q)]
    for a in actions:
        q = q - problem.caps_bits[a]
        q[q <= problem.tol_q] = 0.0
        out.append(tuple(q))
    return out


def write_trace_csv(rows: list[TraceRow], fh, label: str = "") -> None:
    """One line per selected node: depth, F, G, E and the queue vector."""
    for r in rows:
        q = ";".join(f"{v:.12g}" for v in r.queue)
        fh.write(f"{label},{r.depth},{r.f:.12g},{r.g:.12g},{r.h:.12g},{q}\n")
