"""One-slot throughput region: power-tuple enumeration, Pareto filtering and
the refined set of frontier-producing power tuples."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import CapacityError
from .numerics import max_rate_rows, max_rate_tuple
from .scenario import NetworkScenario

TAU_DOM = 1e-9
DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class FrontierPoint:
    rate: tuple[float, ...]
    power: tuple[float, ...]


@dataclass(frozen=True)
class FrontierSet:
    """Pareto frontier of the one-slot region with one producing power tuple
    per point, sorted by power tuple."""

    points: tuple[FrontierPoint, ...]
    fingerprint: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @cached_property
    def rates(self) -> np.ndarray:
        return np.array([p.rate for p in self.points], dtype=float).reshape(len(self.points), -1)

    @cached_property
    def powers(self) -> np.ndarray:
        return np.array([p.power for p in self.points], dtype=float).reshape(len(self.points), -1)


def enumerate_power_tuples(scenario: NetworkScenario, cap: int = DEFAULT_ENUM_CAP) -> list[tuple]:
    """Full Cartesian product of the power sets in lexicographic order."""
    size = scenario.n_power_tuples
    if size > cap:
        raise CapacityError(f"{size} power tuples exceed the enumeration cap {cap}")
    return list(itertools.product(*scenario.power_sets))


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 0)
    return np.ascontiguousarray(arr.reshape(len(arr), -1))


def pareto_filter(points, tol: float = TAU_DOM, order=None) -> list[int]:
    """Indices of the Pareto frontier of ``points`` (non-strict dominance).

    Points equal within ``tol`` collapse to one representative. By default the
    representative is the earliest index; pass ``order`` (a priority
    permutation) to choose otherwise. The result is sorted by index.
    """
    pts = _as_points(points)
    if len(pts) == 0:
        return []
    if order is None:
        order = np.arange(len(pts))
    order = np.asarray(order, dtype=np.int64)
    # Stable sort by descending coordinate sum: a dominator always sums at
    # least as high (up to tol), so it is scanned first.
    rank = np.empty(len(pts), dtype=np.int64)
    rank[order] = np.arange(len(order))
    sums = np.round(pts.sum(axis=1), 12)
    scan = np.lexsort((rank, -sums)).astype(np.int64)
    keep = kernels.nondominated_mask(pts, scan, float(tol))
    return [int(i) for i in np.flatnonzero(keep)]


def weak_pareto_filter(points, tol: float = TAU_DOM) -> list[int]:
    """Indices of points not strictly dominated (greater by more than ``tol``
    in every component) by any other point; duplicates collapse to the
    earliest index."""
    pts = _as_points(points)
    if len(pts) == 0:
        return []
    # A strict dominator can always be replaced by a Pareto point above it.
    front = pts[pareto_filter(pts, tol)]
    out = []
    seen = np.empty((0, pts.shape[1]))
    for start in range(0, len(pts), 4096):
        block = pts[start:start + 4096]
        strict = (front[None, :, :] > block[:, None, :] + tol).all(axis=2).any(axis=1)
        for j in np.flatnonzero(~strict):
            p = block[j]
            if len(seen) and (np.abs(seen - p) <= tol).all(axis=1).any():
                continue
            seen = np.vstack([seen, p])
            out.append(start + int(j))
    return out


def one_slot_frontier(scenario: NetworkScenario, cap: int = DEFAULT_ENUM_CAP,
                      tol: float = TAU_DOM) -> FrontierSet:
    """Pareto frontier of the one-slot region and its refined power set.

    When several power tuples reach the same frontier rate-tuple the one with
    the smallest total power is kept, ties broken lexicographically.
    """
    powers = np.array(enumerate_power_tuples(scenario, cap), dtype=float)
    rates = max_rate_rows(scenario, powers)
    total = powers.sum(axis=1)
    # Lexicographic enumeration order already is the lexicographic tie-break.
    priority = np.lexsort((np.arange(len(powers)), total))
    front = pareto_filter(rates, tol, order=priority)
    points = []
    for i in front:
        twins = np.flatnonzero((np.abs(rates - rates[i]) <= tol).all(axis=1))
        best = min(twins, key=lambda j: (total[j], tuple(powers[j])))
        s = tuple(float(v) for v in powers[best])
        points.append(FrontierPoint(rate=max_rate_tuple(scenario, s), power=s))
    points.sort(key=lambda p: p.power)
    return FrontierSet(points=tuple(points), fingerprint=scenario.fingerprint())


def dominated_by_any(frontier_rates: np.ndarray, mu, tol: float = TAU_DOM) -> bool:
    """True when some row of ``frontier_rates`` is >= ``mu`` within ``tol``."""
    mu = np.asarray(mu, dtype=float)
    if len(frontier_rates) == 0:
        return False
    return bool((frontier_rates >= mu[None, :] - tol).all(axis=1).any())
