"""Search-efficiency study: effective branching factor per drain solve and
the per-horizon averages of margin iterations and branching ratio over
random target rate-tuples."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CapacityError
from .margin import rate_margin
from .region import FrontierSet
from .scenario import NetworkScenario
from .solver import DrainProblem, solve_drain, solve_drain_uninformed

RATE_FLOOR = 1e-6
EBF_TOL = 1e-9


def effective_branching_factor(expanded: int, depth: int, tol: float = EBF_TOL) -> float:
    """Root B >= 0 of B + B^2 + ... + B^depth = expanded, by bisection."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if expanded <= 0:
        return 0.0
    if depth == 1:
        return float(expanded)

    def total(b):
        return sum(b ** t for t in range(1, depth + 1))

    lo, hi = 0.0, float(expanded)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if total(mid) < expanded:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_rate_tuple(frontier: FrontierSet, rng, weights=None, scale=None) -> np.ndarray:
    """Random point of the convex hull of the one-slot region.

    A Dirichlet(1) mix of frontier points shrunk by a uniform factor in
    (0, 1], floored at ``RATE_FLOOR`` so every component stays positive.
    Not uniform over the hull.
    """
    if len(frontier) == 0:
        raise ValueError("frontier is empty")
    rng = np.random.default_rng(rng)
    if weights is None:
        weights = rng.dirichlet(np.ones(len(frontier)))
    if scale is None:
        scale = 1.0 - rng.random()
    mu = scale * (np.asarray(weights, dtype=float) @ frontier.rates)
    return np.maximum(mu, RATE_FLOOR)


@dataclass
class TrialRecord:
    horizon: int
    trial: int
    mu: list[float]
    delta: float | None = None
    iterations: int | None = None
    terminal: str | None = None
    expanded: list[int] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)
    ebr: list[float] = field(default_factory=list)
    ebr_uninformed: list[float] = field(default_factory=list)
    error: str | None = None


@dataclass
class HorizonRow:
    horizon: int
    trials: int
    ain: float
    aebr: float
    failures: int
    aebr_uninformed: float | None = None


@dataclass
class BenchReport:
    seed: int
    n_power_tuples: int
    rows: list[HorizonRow]
    records: list[TrialRecord]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        baseline = any(r.aebr_uninformed is not None for r in self.rows)
        w.writerow(["T", "trials", "AIN", "AEBR"] + (["AEBR_uninformed"] if baseline else []))
        for r in self.rows:
            row = [r.horizon, r.trials, f"{r.ain:.6f}", f"{r.aebr:.6f}"]
            if baseline:
                row.append(f"{r.aebr_uninformed:.6f}")
            w.writerow(row)
        return buf.getvalue()

    def records_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["T", "trial", "mu", "delta", "K", "terminal", "U", "p", "EBR", "error"])
        for r in self.records:
            w.writerow([r.horizon, r.trial, ";".join(f"{v:.12g}" for v in r.mu),
                        "" if r.delta is None else f"{r.delta:.12g}", r.iterations or "",
                        r.terminal or "", ";".join(map(str, r.expanded)),
                        ";".join(map(str, r.depths)), ";".join(f"{v:.9g}" for v in r.ebr),
                        r.error or ""])
        return buf.getvalue()

    def to_json(self, raw: bool = False) -> str:
        doc = {"seed": self.seed, "n_power_tuples": self.n_power_tuples,
               "rows": [asdict(r) for r in self.rows]}
        if raw:
            doc["records"] = [asdict(r) for r in self.records]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_PROBLEMS: dict[str, DrainProblem] = {}


def _problem(scenario: NetworkScenario) -> DrainProblem:
    key = scenario.fingerprint()
    if key not in _PROBLEMS:
        _PROBLEMS[key] = DrainProblem(scenario)
    return _PROBLEMS[key]


def trial_rng(seed: int, horizon: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, horizon, trial), so results do not
    depend on evaluation order or worker count."""
    return np.random.default_rng(np.random.SeedSequence([seed, horizon, trial]))


def run_trial(scenario: NetworkScenario, horizon: int, trial: int, seed: int,
              baseline: bool = False) -> TrialRecord:
    problem = _problem(scenario)
    size = scenario.n_power_tuples
    mu = sample_rate_tuple(problem.frontier, trial_rng(seed, horizon, trial))
    rec = TrialRecord(horizon, trial, [float(v) for v in mu])
    try:
        res = rate_margin(problem, mu, horizon)
        if baseline:
            base = rate_margin(problem, mu, horizon, solver=solve_drain_uninformed)
    except CapacityError as exc:
        rec.error = str(exc)
        return rec
    rec.delta, rec.iterations, rec.terminal = res.delta, res.iterations, res.terminal.value
    for it in res.history:
        p = min(it.p_star, horizon) if it.p_star else horizon
        rec.expanded.append(it.expanded_nodes)
        rec.depths.append(p)
        rec.ebr.append(effective_branching_factor(it.expanded_nodes, p) / size)
    if baseline:
        for it in base.history:
            p = min(it.p_star, horizon) if it.p_star else horizon
            rec.ebr_uninformed.append(effective_branching_factor(it.expanded_nodes, p) / size)
    return rec


def _run_trial_args(args):
    return run_trial(*args)


def run_table1(scenario: NetworkScenario, horizons, trials: int, seed: int = 0, *,
               jobs: int = 1, baseline: bool = False) -> BenchReport:
    """Per horizon: mean margin iterations (AIN) and mean branching ratio
    (AEBR) pooled over every drain solve of every trial.

    Trials that exceed the node budget are kept in the raw records, counted
    as failures and left out of the means.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    tasks = [(scenario, int(T), i, seed, baseline) for T in horizons for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_trial_args, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    else:
        records = [run_trial(*t) for t in tasks]
    rows = []
    for T in horizons:
        ok = [r for r in records if r.horizon == T and r.error is None]
        failures = sum(1 for r in records if r.horizon == T and r.error is not None)
        ain = float(np.mean([r.iterations for r in ok])) if ok else float("nan")
        aebr = float(np.mean([e for r in ok for e in r.ebr])) if ok else float("nan")
        base = float(np.mean([e for r in ok for e in r.ebr_uninformed])) if baseline and ok else None
        rows.append(HorizonRow(int(T), len(ok), ain, aebr, failures, base))
    return BenchReport(seed, scenario.n_power_tuples, rows, records)
