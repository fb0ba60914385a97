"""Weighted counts in arithmetic progressions and the Laplace sums U."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .genfun import TruncationError
from .ntheory import WeightKind, WeightTable, totient


@dataclass(frozen=True)
class ProgressionCount:
    kind: WeightKind
    r: int
    t: int
    q: int
    ell: int
    count: float
    leading: float
    ratio: float


@lru_cache(maxsize=32)
def _buckets(weights: WeightTable, q: int) -> np.ndarray:
    """B[l, m] = sum of w_n over n = l + q j <= l + q m (n >= 1), prefix sums per residue."""
    n_max = weights.n_max
    rows = n_max // q + 1
    vals = np.zeros(rows * q, dtype=weights.values.dtype)
    vals[: n_max + 1] = weights.values
    vals[0] = 0
    out = np.cumsum(vals.reshape(rows, q), axis=0).T
    out.setflags(write=False)
    return out


def _residue_total(weights: WeightTable, t: int, q: int, ell: int):
    if ell > t:
        return weights.values.dtype.type(0)
    return _buckets(weights, q)[ell, (t - ell) // q]


def progression_leading(kind, r: int, t: float, q: int) -> float:
    kind = WeightKind.parse(kind)
    phi = totient(q)
    if kind is WeightKind.PRIME_TUPLE:
        return r / phi * t * math.log(math.log(t)) ** (r - 1) / math.log(t)
    if kind is WeightKind.VON_MANGOLDT_POWER:
        return t * math.log(t) ** (r - 1) / (math.factorial(r - 1) * phi)
    return math.nan


def count_progression(weights: WeightTable, t: int, q: int, ell: int) -> ProgressionCount:
    """sum of w_n over n <= t with n = ell (mod q)."""
    if q < 1:
        raise ValueError("q must be positive")
    if math.gcd(ell, q) != 1:
        raise ValueError(f"gcd({ell}, {q}) != 1")
    if t > weights.n_max:
        raise ValueError(f"t={t} exceeds the weight table ({weights.n_max})")
    raw = _residue_total(weights, t, q, ell % q)
    count = int(raw) if weights.is_integer else float(raw)
    leading = progression_leading(weights.kind, weights.r, t, q) if t >= 3 else math.nan
    return ProgressionCount(weights.kind, weights.r, t, q, ell, count, leading, count / leading)


def coprime_total(weights: WeightTable, t: int, q: int):
    """sum of w_n over n <= t with gcd(n, q) = 1, straight from the table."""
    n = np.arange(1, t + 1)
    v = weights.values[1 : t + 1][np.gcd(n, q) == 1]
    return int(v.sum()) if weights.is_integer else math.fsum(v.tolist())


def equidistribution_report(weights: WeightTable, t: int, q: int) -> dict:
    if q < 2:
        raise ValueError("q must be at least 2")
    if t < 1000:
        raise ValueError("t must be at least 1000")
    rows = [count_progression(weights, t, q, ell) for ell in range(1, q) if math.gcd(ell, q) == 1]
    counts = [float(p.count) for p in rows]
    mean = math.fsum(counts) / len(counts)
    deviation = max(abs(c - mean) for c in counts) / mean if mean else math.nan
    return {
        "kind": weights.kind.name,
        "r": weights.r,
        "t": t,
        "q": q,
        "mean": mean,
        "max_relative_deviation": deviation,
        "classes": [{"ell": p.ell, "count": p.count, "leading": p.leading, "ratio": p.ratio} for p in rows],
    }


@dataclass(frozen=True)
class USum:
    value: complex
    tail_bound: float
    leading: complex


TAIL_SPAN = 20.0


def u_leading(kind, r: int, gamma: complex, q: int) -> complex:
    kind = WeightKind.parse(kind)
    g1 = gamma.real
    L = math.log(1 / g1)
    phi = totient(q)
    if L <= 0:
        # Outside the small-gamma regime the leading term is meaningless.
        return complex(math.nan, math.nan)
    if kind is WeightKind.PRIME_TUPLE:
        return r / phi * math.log(L) ** (r - 1) / (gamma * L)
    if kind is WeightKind.VON_MANGOLDT_POWER:
        return L ** (r - 1) / (math.factorial(r - 1) * phi * gamma)
    return complex(math.nan, math.nan)


def u_sum(weights: WeightTable, gamma: complex, q: int = 1, ell: int = 0) -> USum:
    """U(gamma, ell, q) = sum over n = ell (mod q) of w_n e^(-gamma n), truncated at the table end.

    The tail bound assumes w_n <= D n^0.2 with D fitted on the table.
    """
    gamma = complex(gamma)
    if math.gcd(ell, q) != 1:
        raise ValueError(f"gcd({ell}, {q}) != 1")
    g1 = gamma.real
    N = weights.n_max
    if g1 * N < TAIL_SPAN:
        raise TruncationError(f"Re(gamma) must be at least {TAIL_SPAN}/n_max = {TAIL_SPAN / N:.3g}")
    n = np.arange(ell % q, N + 1, q)
    n = n[n >= 1]
    w = weights.values[n].astype(np.float64)
    keep = w != 0
    n, w = n[keep], w[keep]
    decay = np.exp(-g1 * n)
    x = n * (gamma.imag / (2 * math.pi))
    theta = 2 * math.pi * (x - np.rint(x))
    value = complex(math.fsum((w * decay * np.cos(theta)).tolist()), -math.fsum((w * decay * np.sin(theta)).tolist()))
    k = np.arange(1, N + 1)
    D = float(np.max(weights.values[1:].astype(np.float64) / k**0.2))
    # sum_{n>N} D n^0.2 e^{-g1 n} <= D (N+1)^0.2 e^{-g1 (N+1)} / (1 - e^{-g1}) (1 + 0.2/(g1 N))
    tail = D * (N + 1) ** 0.2 * math.exp(-g1 * (N + 1)) / -math.expm1(-g1) * (1 + 0.2 / (g1 * N))
    return USum(value, tail, u_leading(weights.kind, weights.r, gamma, q))
