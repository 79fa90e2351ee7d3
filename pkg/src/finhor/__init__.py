"""Finite-horizon throughput regions of interfering links under finite
blocklength: rate margins, rate-achieving policies and brute-force oracles."""
from .bench import BenchReport, effective_branching_factor, run_table1, sample_rate_tuple
from .errors import (BoundaryUndefinedError, CapacityError, DomainError, FinhorError,
                     InfeasiblePairError, UnachievableError)
from .kernels import BACKEND
from .margin import MarginResult, Terminal, is_achievable, one_slot_margin, rate_margin, scale_to_boundary
from .numerics import dispersion, inverse_q, max_rate, q_func, sinr
from .oracle import enumerate_frontier, exhaustive_min_slots, margin_by_enumeration, remaining_cost
from .policy import Policy, PolicyEntry, derive_policy, validate_policy
from .region import FrontierSet, one_slot_frontier, pareto_filter, weak_pareto_filter
from .scenario import NetworkScenario, bundled_scenario, load_scenario
from .solver import DrainProblem, DrainSolution, Status, heuristic, solve_drain, solve_drain_uninformed

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BenchReport", "BoundaryUndefinedError", "CapacityError", "DomainError",
    "DrainProblem", "DrainSolution", "FinhorError", "FrontierSet", "InfeasiblePairError",
    "MarginResult", "NetworkScenario", "Policy", "PolicyEntry", "Status", "Terminal",
    "UnachievableError", "bundled_scenario", "derive_policy", "dispersion",
    "effective_branching_factor", "enumerate_frontier", "exhaustive_min_slots", "heuristic",
    "inverse_q", "is_achievable", "load_scenario", "margin_by_enumeration", "max_rate",
    "one_slot_frontier", "one_slot_margin", "pareto_filter", "q_func", "rate_margin",
    "remaining_cost", "run_table1", "sample_rate_tuple", "scale_to_boundary", "sinr",
    "solve_drain", "solve_drain_uninformed", "validate_policy", "weak_pareto_filter",
]
