"""Coefficients of prod_n (1 - z^n)^(-w_n).

Two paths share one recurrence ``n G(n) = sum_k C(k) G(n-k)`` with
``C(k) = sum_{d|k} d w_d``: exact Python integers for integer weights (up to
a configurable cutoff) and a float path that runs on the tilted coefficients
``G(n) rho^n`` so that nothing overflows, returned as logarithms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .ntheory import WeightTable

DEFAULT_EXACT_CUTOFF = 5_000


class DivisibilityError(ArithmeticError):
    """The exact recurrence produced a non-integer: the weight table is corrupt."""


@dataclass(frozen=True)
class LogMagnitude:
    """A signed real stored as (sign, log|x|)."""

    sign: int
    ln_abs: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.sign != 0 and not math.isfinite(self.ln_abs):
            raise ValueError("ln_abs must be finite for a nonzero value")

    @classmethod
    def from_value(cls, x) -> "LogMagnitude":
        if x == 0:
            return cls(0)
        # math.log accepts arbitrarily large ints.
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def __float__(self) -> float:
        return 0.0 if self.sign == 0 else self.sign * math.exp(self.ln_abs)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude(0)
        return LogMagnitude(self.sign * other.sign, self.ln_abs + other.ln_abs)

    def __add__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.ln_abs >= other.ln_abs else (other, self)
        t = math.exp(small.ln_abs - big.ln_abs)
        if big.sign == small.sign:
            return LogMagnitude(big.sign, big.ln_abs + math.log1p(t))
        if t == 1.0:
            return LogMagnitude(0)
        return LogMagnitude(big.sign, big.ln_abs + math.log1p(-t))


def divisor_weight_sums(weights: WeightTable, n_max: int) -> np.ndarray:
    """C(k) = sum_{d|k} d w_d for k <= n_max, as floats."""
    w = weights.values
    C = np.zeros(n_max + 1)
    for d in np.flatnonzero(w[: n_max + 1]).tolist():
        C[d::d] += d * float(w[d])
    return C


def _divisor_weight_sums_exact(weights: WeightTable, n_max: int) -> np.ndarray:
    C = np.zeros(n_max + 1, dtype=object)
    C[:] = 0
    w = weights.values
    for d in np.flatnonzero(w[: n_max + 1]).tolist():
        C[d::d] += d * int(w[d])
    return C


@dataclass(frozen=True, eq=False)
class PartitionSeries:
    weight: WeightTable
    n_max: int
    coeffs_log: np.ndarray  # log G(n); -inf where G(n) = 0
    coeffs_exact: list | None = None

    def log_magnitude(self, n: int) -> LogMagnitude:
        v = self.coeffs_log[n]
        return LogMagnitude(0) if v == -math.inf else LogMagnitude(1, float(v))

    def __getitem__(self, n):
        if self.coeffs_exact is not None and n < len(self.coeffs_exact):
            return self.coeffs_exact[n]
        return self.log_magnitude(n)


def _solve_tilt(C: np.ndarray, n_max: int) -> float:
    """X with sum_k C(k) e^{-k/X} = n_max (rho Phi'(rho) = n_max), by bisection in log X."""
    k = np.arange(len(C), dtype=np.float64)
    nz = C > 0

    def f(logX):
        return float(np.sum(C[nz] * np.exp(-k[nz] / math.exp(logX)))) - n_max

    lo, hi = math.log(0.05), math.log(max(n_max, 2.0))
    while f(hi) < 0:
        if hi > 40.0:
            # Weights too sparse on this range to reach n_max: skip the tilt.
            return math.inf
        hi += 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return math.exp(hi)


def _log_dp(C: np.ndarray, n_max: int) -> np.ndarray:
    """log G(n) for n <= n_max from the float recurrence on tilted coefficients."""
    if n_max == 0:
        return np.zeros(1)
    X = _solve_tilt(C, n_max)
    k = np.arange(n_max + 1, dtype=np.float64)
    Ct = C[: n_max + 1] * np.exp(-k / X)
    # log of the largest tilted coefficient is at most Phi(rho) = sum C(k) rho^k / k.
    phi = float(np.sum(Ct[1:] / k[1:]))
    shift = 0.0
    if phi > 600.0:
        shift = -0.5 * phi
    if phi + shift > 700.0 or n_max / X - shift > 700.0:
        raise OverflowError(f"log DP at n_max={n_max} would leave double range")
    # R[n_max - n] = H(n) keeps each dot product on contiguous slices.
    R = np.zeros(n_max + 1)
    R[n_max] = math.exp(shift)
    for n in range(1, n_max + 1):
        R[n_max - n] = np.dot(Ct[1 : n + 1], R[n_max - n + 1 :]) / n
    H = R[::-1]
    with np.errstate(divide="ignore"):
        out = np.log(H) - shift + k / X
    out[H == 0] = -math.inf
    return out


def _exact_dp(C, n_max: int) -> list[int]:
    """Integer recurrence; every step must divide exactly."""
    C = np.asarray(C, dtype=object)
    # Rev[n_max - n] = G(n) so the dot runs over contiguous slices.
    Rev = np.zeros(n_max + 1, dtype=object)
    Rev[:] = 0
    Rev[n_max] = 1
    for n in range(1, n_max + 1):
        s = int(np.dot(C[1 : n + 1], Rev[n_max - n + 1 :]))
        q, rem = divmod(s, n)
        if rem:
            raise DivisibilityError(f"{n} does not divide the recurrence sum at n={n}")
        Rev[n_max - n] = q
    return [int(v) for v in Rev[::-1]]


def euler_transform(weights: WeightTable, n_max: int, exact_cutoff: int = DEFAULT_EXACT_CUTOFF) -> PartitionSeries:
    """Coefficients of prod_n (1 - z^n)^(-w_n) up to z^n_max."""
    if weights.n_max < n_max:
        raise ValueError(f"weight table reaches {weights.n_max} < {n_max}")
    C = divisor_weight_sums(weights, n_max)
    logs = _log_dp(C, n_max)

    exact = None
    if weights.is_integer and n_max <= exact_cutoff:
        exact = _exact_dp(_divisor_weight_sums_exact(weights, n_max), n_max)
        logs.setflags(write=True)
        for n, v in enumerate(exact):
            logs[n] = math.log(v) if v > 0 else -math.inf
    logs.setflags(write=False)
    return PartitionSeries(weights, n_max, logs, exact)


def count_partitions(weights: WeightTable, n: int):
    """Single coefficient; exact when the weights are integers."""
    series = euler_transform(weights, n, exact_cutoff=max(n, DEFAULT_EXACT_CUTOFF))
    return series[n]


BRUTE_FORCE_LIMIT = 64


def _series_coefficient(w, k: int):
    """[z^(m k)] (1 - z^m)^(-w) = w (w+1) ... (w+k-1) / k!."""
    out = Fraction(1) if isinstance(w, (int, Fraction)) else 1.0
    for i in range(k):
        out = out * (w + i) / (i + 1)
    return out


def brute_force_partitions(weights: WeightTable, n: int):
    """Coefficient of z^n by recursion over the multiplicity of each part.

    Exact (an int) for integer weights, a float otherwise.
    """
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_LIMIT}")
    if weights.n_max < n:
        raise ValueError("weight table too short")
    integer = weights.is_integer
    w = [int(v) if integer else float(v) for v in weights.values[: n + 1]]

    @lru_cache(maxsize=None)
    def rec(remaining: int, largest: int):
        if remaining == 0:
            return 1
        if largest == 0:
            return 0
        total = 0
        wm = w[largest]
        for k in range(remaining // largest + 1):
            if k and wm == 0:
                break
            total += _series_coefficient(wm, k) * rec(remaining - k * largest, largest - 1)
        return total

    result = rec(n, n)
    if integer:
        if isinstance(result, Fraction):
            if result.denominator != 1:
                raise ArithmeticError("non-integer count for integer weights")
            return int(result)
        return int(result)
    return float(result)
