import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _instances import random_rate, random_scenario
from finhor.errors import (BoundaryUndefinedError, DomainError, InfeasiblePairError,
                           UnachievableError)
from finhor.margin import (Terminal, is_achievable, iteration_bound, one_slot_margin,
                           rate_margin, scale_to_boundary)
from finhor.oracle import enumerate_frontier, margin_by_enumeration
from finhor.policy import (Policy, PolicyEntry, bundled_policy, derive_policy, dump_policy,
                           load_policy, validate_policy)
from finhor.region import FrontierPoint, FrontierSet, one_slot_frontier
from finhor.scenario import NetworkScenario, bundled_scenario
from finhor.solver import DrainProblem

FIG2_MARGIN = 1.7369090263719330  # 0.69476.../0.4 by high-precision evaluation
FIG3_SCALED = (1.2011196836659018, 0.7206718101995411)


def toy_frontier(points):
    return FrontierSet(tuple(FrontierPoint(tuple(map(float, p)), (0.0,) * len(p))
                             for p in points))


# --- margin ---------------------------------------------------------------

def test_one_slot_margin_examples():
    front = toy_frontier([(2, 0), (0, 2), (1, 1)])
    assert one_slot_margin(front, (1, 1)) == 1.0
    assert one_slot_margin(front, (0.5, 0.5)) == 2.0
    fig2 = one_slot_frontier(bundled_scenario("fig2"))
    assert one_slot_margin(fig2, (0.3, 0.4)) == pytest.approx(FIG2_MARGIN, abs=1e-13)
    assert one_slot_margin(toy_frontier([(2, 0)]), (1, 1)) == 0.0


@pytest.mark.parametrize("mu", [(0, 1), (-1, 1), (1,), (float("nan"), 1)])
def test_margin_rejects_bad_rates(mu):
    front = toy_frontier([(2, 0), (0, 2)])
    with pytest.raises(DomainError, match="inactive|components"):
        one_slot_margin(front, mu)
    with pytest.raises(DomainError):
        rate_margin(bundled_scenario("fig2"), mu, 2)


@pytest.mark.parametrize("mu, want", [((0.5, 0.5), 1.9046), ((1.6729, 0.2316), 1.0),
                                      ((2, 1.2), 0.6006)])
def test_fig3_margins(mu, want):
    res = rate_margin(bundled_scenario("fig3"), mu, 3)
    assert res.delta == pytest.approx(want, abs=2e-3)
    assert res.achievable == (res.delta >= 1 - 1e-9)
    assert res.terminal is Terminal.NODE_E
    assert set(res.to_dict()) == {"delta", "iterations", "achievable", "terminal"}
    json.dumps(res.to_dict())


def test_three_pair_margins():
    sc = bundled_scenario("sec5")
    assert rate_margin(sc, (0.5, 0.5, 0.5), 5).delta == pytest.approx(1.2554, abs=2e-3)
    assert rate_margin(sc, (0.3, 1, 1), 5).delta == pytest.approx(0.9079, abs=2e-3)
    assert scale_to_boundary(sc, (0.5, 0.5, 0.5), 5) == pytest.approx((0.6277,) * 3, abs=2e-3)


def test_fig3_boundary_is_member():
    sc = bundled_scenario("fig3")
    b = scale_to_boundary(sc, (2, 1.2), 3)
    assert b == pytest.approx(FIG3_SCALED, abs=1e-9)
    front = enumerate_frontier(sc, 3)
    assert front.contains(b)
    assert not front.contains(np.asarray(b) * (1 + 1e-6))


def test_boundary_fixed_point():
    sc = bundled_scenario("fig3")
    b = scale_to_boundary(sc, (0.5, 0.5), 3)
    assert scale_to_boundary(sc, b, 3) == pytest.approx(b, rel=1e-9)


def test_pair_that_cannot_transmit():
    # Pair 2's direct gain is so small that its rate clamps to zero.
    sc = NetworkScenario(2, [[1, 0.3], [0.3, 1e-4]], [0.1, 0.1], [[0, 3], [0, 3]], 100, 1e-3)
    with pytest.raises(InfeasiblePairError):
        rate_margin(sc, (0.5, 0.5), 2)


def test_node_b_zero_margin():
    # Draw until a rate-tuple is found whose one-slot margin is zero and that
    # stays out of reach; the run then ends with margin 0.
    rng = np.random.default_rng(7)
    for _ in range(500):
        sc = random_scenario(rng)
        T = int(rng.integers(1, 4))
        mu = random_rate(rng, sc, 0.3, 1.6)
        res = rate_margin(sc, mu, T)
        if res.terminal is Terminal.NODE_B:
            assert res.delta == 0.0 and not res.achievable
            with pytest.raises(BoundaryUndefinedError):
                scale_to_boundary(sc, mu, T)
            assert margin_by_enumeration(sc, mu, T) < 1e-7 * T
            return
    pytest.skip("no zero-margin case drawn")


def test_is_achievable_examples():
    sc = bundled_scenario("fig2")
    assert is_achievable(sc, (1.08, 1.08), 2) and not is_achievable(sc, (1.08, 1.08), 3)
    assert is_achievable(sc, (1.4, 0.6), 3) and not is_achievable(sc, (1.4, 0.6), 2)
    assert is_achievable(sc, (0.3, 0.4), 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_margin_properties(seed):
    rng = np.random.default_rng(seed)
    sc = random_scenario(rng)
    T = int(rng.integers(1, 5))
    mu = random_rate(rng, sc)
    problem = DrainProblem(sc)
    res = rate_margin(problem, mu, T)
    assert res.iterations <= iteration_bound(res, T)
    assert res.delta == pytest.approx(margin_by_enumeration(sc, mu, T), abs=1e-6)
    assert res.achievable == is_achievable(problem, mu, T)
    c = float(rng.uniform(0.25, 4))
    assert rate_margin(problem, c * mu, T).delta * c == pytest.approx(res.delta, abs=1e-6)


# --- policy ---------------------------------------------------------------

def test_derive_three_pair_policy():
    sc = bundled_scenario("sec5")
    pol = derive_policy(sc, (0.5, 0.5, 0.5), 5)
    assert pol.horizon == 5 and len(pol.entries) == 5
    assert pol.entries[-1] == PolicyEntry((0.0,) * 3, (0.0,) * 3)
    rep = validate_policy(sc, pol)
    assert rep.verdict and rep.residual <= 1e-12 and rep.first_violation is None
    rates = np.array([e.rate for e in pol.entries])
    assert rates.sum(axis=0) == pytest.approx(5 * np.array([0.5] * 3), abs=1e-12)


def test_reference_policy_fixture_validates():
    pol = bundled_policy()
    assert pol.horizon == 5 and pol.target == (0.5, 0.5, 0.5)
    assert validate_policy(bundled_scenario("sec5"), pol).verdict


def test_validation_catches_excess_rate():
    sc = bundled_scenario("sec5")
    pol = bundled_policy()
    e = pol.entries[2]
    pol.entries[2] = PolicyEntry((e.rate[0] + 0.01,) + e.rate[1:], e.power)
    rep = validate_policy(sc, pol)
    assert not rep.verdict and rep.first_violation == 3 and not rep.slot_ok[2]


def test_validation_catches_foreign_power_and_residual():
    sc = bundled_scenario("sec5")
    pol = bundled_policy()
    pol.entries[4] = PolicyEntry((0.0,) * 3, (0.0, 1.0, 0.0))
    rep = validate_policy(sc, pol)
    assert not rep.verdict and rep.power_ok[4] is False
    pol = bundled_policy()
    pol.target = (0.5, 0.5, 0.6)
    rep = validate_policy(sc, pol)
    assert not rep.verdict and rep.first_violation is None and rep.residual == pytest.approx(0.1)


def test_all_zero_policy():
    sc = bundled_scenario("fig2")
    zero = PolicyEntry((0.0, 0.0), (0.0, 0.0))
    rep = validate_policy(sc, Policy([zero, zero], (0.0, 0.0), 2))
    assert rep.verdict and rep.residual == 0.0


def test_policy_length_mismatch():
    with pytest.raises(DomainError):
        validate_policy(bundled_scenario("fig2"), Policy([], (0.1, 0.1), 2))


def test_unachievable_policy_carries_margin():
    with pytest.raises(UnachievableError) as info:
        derive_policy(bundled_scenario("sec5"), (0.3, 1, 1), 5)
    assert info.value.delta == pytest.approx(0.9079, abs=2e-3)
    assert "0.9079" in str(info.value)


def test_one_slot_policy():
    sc = bundled_scenario("fig2")
    pol = derive_policy(sc, (0.3, 0.4), 1)
    assert pol.entries == [PolicyEntry((0.3, 0.4), (3.0, 3.0))]


def test_policy_json_roundtrip(tmp_path):
    pol = derive_policy(bundled_scenario("sec5"), (0.5, 0.5, 0.5), 5)
    path = tmp_path / "p.json"
    dump_policy(pol, path, extra={"validation": {"verdict": True}})
    assert load_policy(path) == pol
    path.write_text("{broken")
    with pytest.raises(DomainError):
        load_policy(path)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_policy_roundtrip_property(seed):
    rng = np.random.default_rng(seed)
    sc = random_scenario(rng)
    T = int(rng.integers(1, 5))
    mu = random_rate(rng, sc, 0.2, 1.0)
    problem = DrainProblem(sc)
    if not is_achievable(problem, mu, T):
        with pytest.raises(UnachievableError):
            derive_policy(problem, mu, T)
        return
    pol = derive_policy(problem, mu, T)
    assert validate_policy(sc, pol).verdict
    rates = np.array([e.rate for e in pol.entries])
    assert rates.sum(axis=0) == pytest.approx(T * mu, abs=1e-9 * T)
    used = [any(v > 0 for v in e.power) for e in pol.entries]
    p = sum(used)
    assert used == [True] * p + [False] * (T - p)
