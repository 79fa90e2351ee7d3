"""Command-line entry point: ``finhor {frontier,margin,policy,bench}``.

Exit codes: 0 success, 2 input error, 3 capacity error, 4 unachievable rate
(policy derivation only).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .bench import run_table1
from .errors import CapacityError, DomainError, InfeasiblePairError, UnachievableError
from .margin import rate_margin
from .oracle import enumerate_frontier
from .policy import derive_policy, dump_policy, load_policy, validate_policy
from .region import DEFAULT_ENUM_CAP
from .scenario import bundled_scenario, load_scenario
from .solver import DrainProblem, solve_drain, write_trace_csv

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_UNACHIEVABLE = 0, 2, 3, 4
RATE_UNITS = "rates in bits per channel use"


def _scenario(arg: str):
    """A scenario file path, or the name of a bundled fixture."""
    if not Path(arg).exists():
        try:
            return bundled_scenario(arg)
        except FileNotFoundError:
            raise DomainError(f"no scenario file or bundled scenario named {arg!r}") from None
    return load_scenario(arg)


def _rate_list(text: str, n: int) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise DomainError(f"--rate must be a comma-separated list of numbers, got {text!r}") from None
    if len(values) != n:
        raise DomainError(f"--rate has {len(values)} entries but the scenario has {n} pairs")
    if any(not v > 0 for v in values):
        raise DomainError("every --rate entry must be positive")
    return values


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise DomainError(f"expected a comma-separated list of integers, got {text!r}") from None
    if any(v < 1 for v in values):
        raise DomainError("horizons must be positive")
    return values


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_frontier(args) -> int:
    scenario = _scenario(args.scenario)
    hf = enumerate_frontier(scenario, args.horizon, cap=args.cap)
    n = scenario.n_pairs
    if args.format == "json":
        doc = {"units": RATE_UNITS, "horizon": args.horizon, "points": [
            {"rate": [float(v) for v in hf.points[i]], "pareto": bool(hf.pareto[i]),
             "weak_pareto": bool(hf.weak[i]), "powers": [list(p) for p in hf.power_sequence(i)]}
            for i in range(len(hf.points))]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# {RATE_UNITS}; horizon {args.horizon}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"rate_{k + 1}" for k in range(n)] + ["pareto", "weak_pareto", "powers"])
        for i in range(len(hf.points)):
            powers = ";".join("/".join(f"{v:g}" for v in p) for p in hf.power_sequence(i))
            w.writerow([f"{v:.12g}" for v in hf.points[i]]
                       + [int(hf.pareto[i]), int(hf.weak[i]), powers])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_margin(args) -> int:
    scenario = _scenario(args.scenario)
    mu = _rate_list(args.rate, scenario.n_pairs)
    problem = DrainProblem(scenario)
    solver = solve_drain
    traces = []
    if args.trace:
        def solver(p, q0, cap):
            sol = solve_drain(p, q0, cap, trace=True)
            traces.append(sol.trace)
            return sol
    res = rate_margin(problem, mu, args.horizon, solver=solver)
    doc = res.to_dict()
    doc["boundary_rate"] = [res.delta * v for v in mu] if res.delta > 0 else None
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write("iteration,depth,F,G,E,queue\n")
            for k, rows in enumerate(traces, start=1):
                write_trace_csv(rows, fh, label=str(k))
    return EXIT_OK


def cmd_policy(args) -> int:
    scenario = _scenario(args.scenario)
    if args.validate:
        report = validate_policy(scenario, load_policy(args.validate))
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
        return EXIT_OK
    if args.rate is None or args.horizon is None:
        raise DomainError("policy derivation needs --rate and --horizon (or use --validate)")
    mu = _rate_list(args.rate, scenario.n_pairs)
    try:
        policy = derive_policy(scenario, mu, args.horizon)
    except UnachievableError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if exc.delta > 0:
            scaled = ",".join(f"{exc.delta * v:.6g}" for v in mu)
            sys.stderr.write(f"hint: the scaled rate-tuple {scaled} lies on the boundary\n")
        return EXIT_UNACHIEVABLE
    report = validate_policy(scenario, policy)
    stamp = {"validation": {"verdict": report.verdict, "residual": report.residual},
             "units": RATE_UNITS}
    if args.out:
        dump_policy(policy, args.out, extra=stamp)
    else:
        doc = policy.to_dict()
        doc.update(stamp)
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    scenario = _scenario(args.scenario)
    report = run_table1(scenario, _int_list(args.horizons), args.trials, args.seed,
                        jobs=args.jobs, baseline=args.baseline)
    text = report.to_json(raw=args.raw is not None) if args.format == "json" else report.to_csv()
    _emit(text, args.out)
    if args.raw:
        Path(args.raw).write_text(report.records_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finhor", description="Finite-horizon throughput regions of interfering links.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frontier", help="enumerate the T-slot region and flag its frontier")
    p.add_argument("scenario", help="scenario JSON file or bundled name (fig2, fig3, sec5, table1)")
    p.add_argument("--horizon", "-T", type=int, default=1)
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP,
                   help="largest number of action sequences to enumerate")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("margin", help="rate margin of a rate-tuple")
    p.add_argument("scenario")
    p.add_argument("--rate", required=True, help="comma-separated target rates")
    p.add_argument("--horizon", "-T", type=int, required=True)
    p.add_argument("--trace", help="write the search trace of every iteration to this CSV")
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("policy", help="derive or validate a rate-achieving policy")
    p.add_argument("scenario")
    p.add_argument("--rate")
    p.add_argument("--horizon", "-T", type=int)
    p.add_argument("--out", "-o")
    p.add_argument("--validate", metavar="POLICY_JSON")
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("bench", help="iteration and branching-ratio study")
    p.add_argument("scenario")
    p.add_argument("--horizons", default="2,3,4,5")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--baseline", action="store_true",
                   help="also measure the uninformed search (slow for large T)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", "-o")
    p.add_argument("--raw", help="write per-trial records to this CSV")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "horizon", None) is not None and args.horizon < 1:
        sys.stderr.write("error: --horizon must be at least 1\n")
        return EXIT_INPUT
    try:
        return args.func(args)
    except (DomainError, InfeasiblePairError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except CapacityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
