"""Scalar kernels: Gaussian tail quantile, SINR, dispersion and the
normal-approximation finite-blocklength rate.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .scenario import NetworkScenario

LOG2E = math.log2(math.e)
DISPERSION_LIMIT = LOG2E * LOG2E / 2.0

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation of the standard normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def q_func(x: float) -> float:
    """Standard normal complementary CDF."""
    return 0.5 * math.erfc(x / _SQRT2)


def _normal_quantile_guess(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log1p(-p))
        return -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
        (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def inverse_q(p: float) -> float:
    """Return x with Q(x) = p, where Q is the standard normal tail.

    A rational initial guess is polished with two Halley steps against
    :func:`q_func`, which gives close to full double precision.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"inverse_q needs p in (0, 1), got {p!r}")
    if p == 0.5:
        return 0.0
    # Work on the lower tail so erfc stays accurate, then mirror.
    flip = p > 0.5
    pl = 1.0 - p if flip else p
    x = -_normal_quantile_guess(pl)
    for _ in range(2):
        err = q_func(x) - pl
        u = err * _SQRT2PI * math.exp(0.5 * x * x)
        x = x + u / (1.0 - 0.5 * x * u)
    return -x if flip else x


def sinr(scenario: NetworkScenario, s, n: int) -> float:
    """SINR of pair ``n`` (0-based) under power tuple ``s``; interference is noise."""
    if not 0 <= n < scenario.n_pairs:
        raise IndexError(f"pair index {n} out of range")
    if s[n] == 0:
        return 0.0
    interference = scenario.noise[n]
    for m in range(scenario.n_pairs):
        if m != n:
            interference += scenario.gains[m][n] * s[m]
    return scenario.gains[n][n] * s[n] / interference


def interference_free_sinr(scenario: NetworkScenario, n: int) -> float:
    """SINR of pair n at its largest power with every other pair silent."""
    return scenario.gains[n][n] * scenario.max_powers[n] / scenario.noise[n]


def dispersion(gamma: float) -> float:
    if gamma < 0:
        raise DomainError("gamma must be non-negative")
    return DISPERSION_LIMIT * (1.0 - 1.0 / ((1.0 + gamma) ** 2))


def max_rate(gamma: float, L: int, eps: float) -> float:
    """Finite-blocklength normal approximation of the maximal coding rate,
    clamped below at zero."""
    if gamma < 0:
        raise DomainError("gamma must be non-negative")
    if L < 1:
        raise DomainError("blocklength must be at least 1")
    if not 0.0 < eps < 0.5:
        raise DomainError("eps must lie in (0, 0.5)")
    if gamma == 0:
        return 0.0
    rate = 0.5 * math.log2(1.0 + gamma) - math.sqrt(dispersion(gamma) / L) * inverse_q(eps)
    return max(0.0, rate)


def max_rate_tuple(scenario: NetworkScenario, s) -> tuple[float, ...]:
    L, eps = scenario.blocklength, scenario.error_prob
    return tuple(max_rate(sinr(scenario, s, n), L, eps) for n in range(scenario.n_pairs))


def interference_free_rates(scenario: NetworkScenario) -> np.ndarray:
    L, eps = scenario.blocklength, scenario.error_prob
    return np.array([max_rate(interference_free_sinr(scenario, n), L, eps)
                     for n in range(scenario.n_pairs)])


def sinr_matrix(scenario: NetworkScenario, powers: np.ndarray) -> np.ndarray:
    """Row-wise SINR for an (M, N) array of power tuples."""
    powers = np.asarray(powers, dtype=float)
    H = scenario.gain_matrix
    cross = H.copy()
    np.fill_diagonal(cross, 0.0)
    signal = powers * np.diag(H)[None, :]
    denom = np.asarray(scenario.noise)[None, :] + powers @ cross
    return signal / denom


def max_rate_array(gamma: np.ndarray, L: int, eps: float) -> np.ndarray:
    """Vectorized :func:`max_rate`."""
    gamma = np.asarray(gamma, dtype=float)
    if (gamma < 0).any():
        raise DomainError("gamma must be non-negative")
    V = DISPERSION_LIMIT * (1.0 - 1.0 / (1.0 + gamma) ** 2)
    rate = 0.5 * np.log2(1.0 + gamma) - np.sqrt(V / L) * inverse_q(eps)
    return np.maximum(rate, 0.0)


def max_rate_rows(scenario: NetworkScenario, powers: np.ndarray) -> np.ndarray:
    """Maximum rate-tuple of every row of an (M, N) power array."""
    return max_rate_array(sinr_matrix(scenario, powers), scenario.blocklength,
                          scenario.error_prob)
