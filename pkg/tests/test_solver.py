import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _instances import random_rate, random_scenario
from finhor.errors import CapacityError, DomainError, InfeasiblePairError
from finhor.numerics import max_rate_tuple
from finhor.oracle import exhaustive_min_slots
from finhor.scenario import NetworkScenario, bundled_scenario
from finhor.solver import (DrainProblem, Status, heuristic, node_budget, replay, solve_drain,
                           solve_drain_uninformed, write_trace_csv)

RATE_30 = 2.1620154305986228


def test_three_pair_example_finishes_in_four_slots():
    sc = bundled_scenario("sec5")
    sol = solve_drain(sc, [250, 250, 250], 5)
    assert sol.status is Status.SOLVED and sol.p_star == 4
    assert sol.objective == pytest.approx(3 + sol.frac_term)
    assert sol.queue_trace[-1] == (0.0, 0.0, 0.0)


def test_fig3_outside_region():
    sol = solve_drain(bundled_scenario("fig3"), [600, 360], 3)
    assert sol.status is Status.EXCEEDS_HORIZON and sol.p_star is None and sol.objective is None


def test_empty_start():
    for solve in (solve_drain, solve_drain_uninformed):
        sol = solve(bundled_scenario("fig2"), [0, 0], 3)
        assert sol.status is Status.EMPTY_START and sol.p_star == 0 and sol.frac_term == 0


def test_heuristic_examples():
    assert heuristic(bundled_scenario("fig2"), [0, 0]) == 0.0
    single = NetworkScenario(1, [[1.0]], [0.1], [[0, 3]], 100, 1e-3)
    r = max_rate_tuple(single, (3,))[0]
    assert heuristic(single, [250]) == pytest.approx(250 / (r * 100))
    assert heuristic(bundled_scenario("fig2"), [600, 360]) == pytest.approx(
        2.7751883335720268, abs=1e-12)
    assert heuristic(bundled_scenario("fig2"), [600, 360]) == pytest.approx(600 / (RATE_30 * 100))


def test_single_pair_slot_count():
    sc = NetworkScenario(1, [[1.0]], [0.1], [[0, 3]], 100, 1e-3)
    cap = RATE_30 * 100
    for q in (1.0, cap, cap * 1.5, cap * 3.99):
        sol = solve_drain(sc, [q], 10)
        assert sol.p_star == int(np.ceil(q / cap - 1e-12))


def test_infeasible_pair():
    sc = NetworkScenario(2, [[1, 0.3], [0.3, 1e-9]], [0.1, 0.1], [[0, 3], [0, 3]], 100, 1e-3)
    with pytest.raises(InfeasiblePairError):
        solve_drain(sc, [10, 10], 3)
    with pytest.raises(InfeasiblePairError):
        heuristic(sc, [0, 10])
    assert solve_drain(sc, [10, 0], 3).status is Status.SOLVED


def test_bad_inputs():
    sc = bundled_scenario("fig2")
    with pytest.raises(DomainError):
        solve_drain(sc, [1, 2, 3], 3)
    with pytest.raises(DomainError):
        solve_drain(sc, [-1, 2], 3)
    with pytest.raises(DomainError):
        solve_drain(sc, [1, 2], 0)


def test_node_budget(monkeypatch):
    sc = bundled_scenario("table1")
    with pytest.raises(CapacityError):
        solve_drain_uninformed(sc, [300, 300, 300], 5, budget=500)
    with pytest.raises(CapacityError):
        solve_drain(sc, [300, 300, 300], 5, budget=30)
    monkeypatch.setenv("FINHOR_NODE_BUDGET", "30")
    assert node_budget() == 30
    with pytest.raises(CapacityError):
        solve_drain(sc, [300, 300, 300], 5)


def test_trace_rows_and_csv():
    sol = solve_drain(bundled_scenario("sec5"), [250, 250, 250], 5, trace=True)
    assert sol.trace[0].depth == 0 and len(sol.trace) == sol.expanded_nodes + 1
    assert all(abs(r.f - r.g - r.h) < 1e-12 for r in sol.trace)
    buf = io.StringIO()
    write_trace_csv(sol.trace, buf, label="1")
    assert buf.getvalue().count("\n") == len(sol.trace)


def _cases(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        sc = random_scenario(rng)
        T = int(rng.integers(1, 5))
        yield sc, T, T * random_rate(rng, sc) * sc.blocklength


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_solution_invariants(seed):
    (sc, T, q0), = _cases(seed, 1)
    problem = DrainProblem(sc)
    sol = solve_drain(problem, q0, T)
    base = solve_drain_uninformed(problem, q0, T)
    ref = exhaustive_min_slots(sc, q0, T)
    assert sol.status == base.status == ref.status
    assert base.expanded_nodes >= sol.expanded_nodes
    if sol.status is Status.SOLVED:
        assert sol.p_star <= T and 0 < sol.frac_term <= 1
        assert sol.p_star == ref.p_star == base.p_star
        assert sol.frac_term == pytest.approx(ref.frac_term, abs=1e-9)
        assert replay(problem, q0, sol.action_seq) == sol.queue_trace
        assert sol.queue_trace[-1] == (0.0,) * sc.n_pairs
        assert len(sol.power_seq) == sol.p_star
        assert all(p in [f.power for f in problem.frontier] for p in sol.power_seq)
        served = np.cumsum(problem.caps_bits[sol.action_seq], axis=0)
        assert (np.diff(served, axis=0) >= 0).all()
        assert np.allclose(served[-1], sol.served)
