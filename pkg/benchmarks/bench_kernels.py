"""Compare the compiled and numpy kernel backends.

Times one node expansion, one dominance-pruning pass, a Pareto scan and a
whole drain solve on the bundled scenarios, then checks both backends return
identical results.

    python3 benchmarks/bench_kernels.py [--repeat 200]
"""
import argparse
import timeit

import numpy as np

from finhor.kernels import load_backend
from finhor.region import enumerate_power_tuples
from finhor.numerics import max_rate_rows
from finhor.scenario import bundled_scenario
from finhor.solver import DrainProblem, solve_drain


def cases(problem):
    rng = np.random.default_rng(0)
    n = problem.scenario.n_pairs
    L = problem.scenario.blocklength
    q0 = np.full(n, 2.0 * L)
    queue = q0 * 0.6
    served = q0 * 0.4
    nodes = 4096
    served_buf = rng.random((nodes, n)) * L
    depth_buf = rng.integers(0, 5, nodes).astype(np.int64)
    alive = np.ones(nodes, dtype=np.uint8)
    sel = np.full(n, 0.5 * L)
    powers = np.array(enumerate_power_tuples(problem.scenario), dtype=float)
    pts = np.ascontiguousarray(max_rate_rows(problem.scenario, powers))
    order = np.argsort(-pts.sum(axis=1), kind="stable").astype(np.int64)
    return {
        "expand": lambda k: k.expand(queue, served, problem.caps_bits, problem.inv_if_bits,
                                     q0, problem.tol_q),
        "prune": lambda k: k.prune_dominated(served_buf, depth_buf, alive.copy(), nodes,
                                             sel, 2, problem.tol_prune),
        "pareto scan": lambda k: k.nondominated_mask(pts, order, 1e-9),
        "drain solve": lambda k: solve_drain(problem, 5 * np.full(n, 0.5 * L), 5, backend=k).frac_term,
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    backends = {name: load_backend(name) for name in ("cython", "python")}
    print(f"{'scenario':<8} {'kernel':<12} {'cython us':>10} {'python us':>10} {'speedup':>8}  match")
    for name in ("sec5", "table1"):
        problem = DrainProblem(bundled_scenario(name))
        for label, fn in cases(problem).items():
            reps = max(1, args.repeat // 20) if label == "drain solve" else args.repeat
            t = {b: min(timeit.repeat(lambda: fn(k), number=reps, repeat=3)) / reps * 1e6
                 for b, k in backends.items()}
            match = same(fn(backends["cython"]), fn(backends["python"]))
            print(f"{name:<8} {label:<12} {t['cython']:10.1f} {t['python']:10.1f} "
                  f"{t['python'] / t['cython']:8.2f}  {match}")


if __name__ == "__main__":
    main()
