"""Rate-achieving policies: per-slot (rate, power) schedules whose average
equals the target rate-tuple while respecting each slot's capacity."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, UnachievableError
from .margin import check_rate, rate_margin
from .numerics import max_rate_tuple
from .region import TAU_DOM
from .scenario import NetworkScenario
from .solver import Status, _as_problem, solve_drain

RESIDUAL_TOL = 1e-6


@dataclass
class PolicyEntry:
    rate: tuple[float, ...]
    power: tuple[float, ...]


@dataclass
class Policy:
    entries: list[PolicyEntry]
    target: tuple[float, ...]
    horizon: int

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "target": list(self.target),
            "entries": [{"rate": list(e.rate), "power": list(e.power)} for e in self.entries],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Policy":
        try:
            entries = [PolicyEntry(tuple(float(v) for v in e["rate"]),
                                   tuple(float(v) for v in e["power"]))
                       for e in doc["entries"]]
            return cls(entries=entries, target=tuple(float(v) for v in doc["target"]),
                       horizon=int(doc["horizon"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed policy document: {exc}") from exc


def load_policy(path) -> Policy:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return Policy.from_dict(doc)


def dump_policy(policy: Policy, path, extra: dict | None = None) -> None:
    doc = policy.to_dict()
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def bundled_policy(name: str = "sec5_policy") -> Policy:
    from importlib.resources import files
    return Policy.from_dict(json.loads(files("finhor").joinpath("data", f"{name}.json").read_text()))


def derive_policy(scenario_or_problem, mu, T: int) -> Policy:
    """Policy read off the optimal drain of ``T * mu * L`` bits.

    Slot t transmits the queue decrement of the optimal sequence divided by L;
    slots after the last one used are silent.
    """
    problem = _as_problem(scenario_or_problem)
    scenario = problem.scenario
    if T < 1:
        raise DomainError("horizon T must be at least 1")
    mu = check_rate(mu, scenario.n_pairs)
    L = scenario.blocklength
    sol = solve_drain(problem, T * mu * L, T)
    if sol.status is Status.EXCEEDS_HORIZON:
        raise UnachievableError(rate_margin(problem, mu, T).delta, T)
    entries = []
    trace = np.asarray(sol.queue_trace)
    for t, power in enumerate(sol.power_seq):
        entries.append(PolicyEntry(tuple(float(v) for v in (trace[t] - trace[t + 1]) / L),
                                   tuple(power)))
    zeros = (0.0,) * scenario.n_pairs
    entries += [PolicyEntry(zeros, zeros) for _ in range(T - len(entries))]
    return Policy(entries=entries, target=tuple(float(v) for v in mu), horizon=T)


@dataclass
class ValidationReport:
    slot_ok: list[bool]
    power_ok: list[bool]
    residual: float
    verdict: bool
    first_violation: int | None = None
    reasons: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "residual": self.residual,
            "slot_ok": self.slot_ok,
            "power_ok": self.power_ok,
            "first_violation": self.first_violation,
            "reasons": self.reasons,
        }


def validate_policy(scenario: NetworkScenario, policy: Policy,
                    tol: float = TAU_DOM, residual_tol: float = RESIDUAL_TOL) -> ValidationReport:
    """Check every slot against its maximum rate-tuple and the average
    against the target. Never raises for a well-shaped policy."""
    n = scenario.n_pairs
    if len(policy.entries) != policy.horizon:
        raise DomainError(f"policy has {len(policy.entries)} entries for horizon {policy.horizon}")
    slot_ok, power_ok, reasons = [], [], []
    first = None
    total = np.zeros(n)
    for t, e in enumerate(policy.entries):
        if len(e.rate) != n or len(e.power) != n:
            raise DomainError(f"slot {t + 1}: rate and power need {n} components")
        in_set = all(p in scenario.power_sets[m] for m, p in enumerate(e.power))
        rate = np.asarray(e.rate, dtype=float)
        cap = np.asarray(max_rate_tuple(scenario, e.power)) if in_set else np.zeros(n)
        ok = in_set and bool((rate >= -tol).all() and (rate <= cap + tol).all())
        power_ok.append(in_set)
        slot_ok.append(ok)
        if not ok:
            if first is None:
                first = t + 1
            why = "power not in the power sets" if not in_set else "rate exceeds slot capacity"
            reasons.append(f"slot {t + 1}: {why}")
        total += rate
    residual = float(np.abs(total / policy.horizon - np.asarray(policy.target)).max()) if n else 0.0
    if residual > residual_tol:
        reasons.append(f"average misses the target by {residual:.3g}")
    verdict = first is None and residual <= residual_tol
    return ValidationReport(slot_ok, power_ok, residual, verdict, first, reasons)
