"""Exception types raised across the package."""


class FinhorError(Exception):
    """Base class for all package errors."""


class DomainError(FinhorError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(FinhorError):
    """An enumeration or search would exceed its configured size cap."""


class InfeasiblePairError(FinhorError):
    """A pair has data queued but can never transmit at a positive rate."""

    def __init__(self, pair: int):
        super().__init__(
            f"pair {pair} has a non-empty queue but a zero interference-free "
            "rate; its queue can never drain"
        )
        self.pair = pair


class UnachievableError(FinhorError):
    """The requested rate-tuple lies outside the T-slot throughput region."""

    def __init__(self, delta: float, horizon: int):
        msg = f"rate-tuple is not achievable in {horizon} slots (margin {delta:.6g})"
        if delta > 0:
            msg += f"; scale it down by at least a factor {delta:.6g} (divide by {1.0 / delta:.6g})"
        super().__init__(msg)
        self.delta = delta
        self.horizon = horizon


class BoundaryUndefinedError(FinhorError):
    """The rate margin is zero so no boundary point exists along the direction."""
