"""Static network description and its JSON file format.

Units are normalized: gains and powers are dimensionless, rates are bits per
channel use, queues are bits.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class NetworkScenario:
    """N transmitter-receiver pairs sharing one band.

    ``gains[m][n]`` is the power gain from transmitter m to receiver n; the
    diagonal holds the direct gains.  Every power set contains 0.
    """

    n_pairs: int
    gains: tuple[tuple[float, ...], ...]
    noise: tuple[float, ...]
    power_sets: tuple[tuple[float, ...], ...]
    blocklength: int
    error_prob: float

    def __post_init__(self):
        n = self.n_pairs
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise DomainError("n_pairs must be a positive integer")
        object.__setattr__(self, "n_pairs", int(n))
        gains = tuple(tuple(float(v) for v in row) for row in self.gains)
        if len(gains) != n or any(len(row) != n for row in gains):
            raise DomainError(f"gains must be a {n}x{n} matrix")
        for m in range(n):
            for k in range(n):
                if not np.isfinite(gains[m][k]) or gains[m][k] < 0:
                    raise DomainError(f"gains[{m}][{k}] must be a finite non-negative real")
            if gains[m][m] <= 0:
                raise DomainError(f"direct gain gains[{m}][{m}] must be positive")
        noise = tuple(float(w) for w in self.noise)
        if len(noise) != n:
            raise DomainError(f"noise must have {n} entries")
        if any(not np.isfinite(w) or w <= 0 for w in noise):
            raise DomainError("noise powers must be strictly positive")
        if len(self.power_sets) != n:
            raise DomainError(f"power_sets must have {n} entries")
        psets = []
        for i, ps in enumerate(self.power_sets):
            vals = sorted({float(v) for v in ps})
            if any(not np.isfinite(v) or v < 0 for v in vals):
                raise DomainError(f"power_sets[{i}] must hold non-negative reals")
            if not vals or vals[0] != 0.0:
                raise DomainError(f"power_sets[{i}] must contain 0 (no transmission)")
            psets.append(tuple(vals))
        L = self.blocklength
        if not isinstance(L, (int, np.integer)) or isinstance(L, bool) or L < 1:
            raise DomainError("blocklength must be a positive integer")
        eps = float(self.error_prob)
        if not 0.0 < eps < 0.5:
            raise DomainError("error_prob must lie in (0, 0.5)")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "power_sets", tuple(psets))
        object.__setattr__(self, "blocklength", int(L))
        object.__setattr__(self, "error_prob", eps)

    @property
    def gain_matrix(self) -> np.ndarray:
        return np.array(self.gains, dtype=float)

    @property
    def max_powers(self) -> tuple[float, ...]:
        return tuple(ps[-1] for ps in self.power_sets)

    @property
    def n_power_tuples(self) -> int:
        return int(np.prod([len(ps) for ps in self.power_sets], dtype=object))

    def to_dict(self) -> dict:
        return {
            "pairs": self.n_pairs,
            "gains": [list(row) for row in self.gains],
            "noise": list(self.noise),
            "power_sets": [list(ps) for ps in self.power_sets],
            "blocklength": self.blocklength,
            "error_prob": self.error_prob,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NetworkScenario":
        if not isinstance(doc, dict):
            raise DomainError("scenario document must be a JSON object")
        required = ("pairs", "gains", "noise", "power_sets", "blocklength", "error_prob")
        missing = [k for k in required if k not in doc]
        if missing:
            raise DomainError(f"scenario is missing field(s): {', '.join(missing)}")
        try:
            return cls(
                n_pairs=doc["pairs"],
                gains=doc["gains"],
                noise=doc["noise"],
                power_sets=doc["power_sets"],
                blocklength=doc["blocklength"],
                error_prob=doc["error_prob"],
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed scenario field: {exc}") from exc

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def load_scenario(path) -> NetworkScenario:
    """Parse a scenario JSON file, raising DomainError with location info."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    try:
        return NetworkScenario.from_dict(doc)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from exc


def dump_scenario(scenario: NetworkScenario, path) -> None:
    Path(path).write_text(json.dumps(scenario.to_dict(), indent=2) + "\n")


def bundled_scenario(name: str) -> NetworkScenario:
    """Load one of the shipped fixtures: fig2, fig3, sec5 or table1."""
    return load_scenario(Path(__file__).parent / "data" / f"{name}.json")
