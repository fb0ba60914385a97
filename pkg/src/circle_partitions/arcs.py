"""Major/minor arc decomposition, rational approximation and exponential sums."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .constants import ConstantsTable, build_constants
from .genfun import phi_eval, phi_radial_derivative
from .ntheory import WeightKind, WeightTable, _factorize


class ArcOverlapError(ValueError):
    pass


def _max_neighbour_sum(q_max: int) -> int:
    """Largest q + q' over consecutive fractions of the Farey sequence of order q_max."""
    return 2 if q_max <= 1 else 2 * q_max - 1


def arcs_disjoint(X: float, A: float) -> bool:
    # Neighbours a/q, a'/q' are 1/(q q') apart; arcs overlap iff X < Q (q + q').
    Q = math.log(X) ** A
    return X >= Q * _max_neighbour_sum(int(math.floor(Q)))


def max_disjoint_exponent(X: float) -> float:
    """Largest A for which the arcs at this X are pairwise disjoint."""
    lo, hi = 0.0, 1.0
    while arcs_disjoint(X, hi):
        hi *= 2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if arcs_disjoint(X, mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class Major:
    q: int
    a: int


MINOR = None


@dataclass(frozen=True, eq=False)
class ArcPartition:
    """Arcs M(q, a) = [a/q - delta_q, a/q + delta_q) on the circle [-1/2, 1/2).

    Centres are stored reduced into [-1/2, 1/2), so M(1, 1) sits at 0.
    """

    X: float
    A: float
    Q: float
    q: np.ndarray
    a: np.ndarray
    center: np.ndarray
    delta: np.ndarray

    def __len__(self):
        return len(self.q)

    @property
    def arcs(self):
        return list(zip(self.q.tolist(), self.a.tolist(), self.center.tolist(), self.delta.tolist()))

    def measure(self) -> float:
        return float(np.sum(2 * self.delta))

    def classify(self, alpha: float):
        """Major(q, a) containing alpha, or None for the minor arcs."""
        x = float(alpha)
        if not -0.5 <= x < 0.5:
            x = (x + 0.5) % 1.0 - 0.5
        i = int(np.searchsorted(self.center, x, side="right")) - 1
        for j in (i, i + 1):
            j %= len(self.center)
            d = x - self.center[j]
            d -= round(d)
            if -self.delta[j] <= d < self.delta[j]:
                return Major(int(self.q[j]), int(self.a[j]))
        return MINOR

    def is_minor(self, alpha: float) -> bool:
        return self.classify(alpha) is MINOR


def build_arcs(X: float, A: float) -> ArcPartition:
    if X < 100:
        raise ValueError("X must be at least 100")
    if A <= 0:
        raise ValueError("A must be positive")
    Q = math.log(X) ** A
    if Q > 1e6:
        raise ValueError(f"(log X)^A = {Q:.3g} exceeds the arc-count limit 1e6")
    if not arcs_disjoint(X, A):
        raise ArcOverlapError(
            f"arcs overlap at X={X:g}, A={A:g} (largest disjoint exponent {max_disjoint_exponent(X):.4f})"
        )
    q_max = int(math.floor(Q))
    qs, as_ = [], []
    for q in range(1, q_max + 1):
        a = np.arange(1, q + 1)
        a = a[np.gcd(a, q) == 1]
        qs.append(np.full(len(a), q))
        as_.append(a)
    q_arr = np.concatenate(qs)
    a_arr = np.concatenate(as_)
    center = a_arr / q_arr
    center = np.where(center >= 0.5, center - 1.0, center)
    order = np.argsort(center, kind="stable")
    q_arr, a_arr, center = q_arr[order], a_arr[order], center[order]
    delta = Q / (q_arr * X)
    return ArcPartition(X, A, Q, q_arr, a_arr, center, delta)


@dataclass(frozen=True)
class RationalApprox:
    alpha: float
    a: int
    q: int
    Upsilon: float


def dirichlet_approx(alpha, Qbound: float) -> RationalApprox:
    """Last continued-fraction convergent a/q with q <= Qbound.

    Then |alpha - a/q| < 1/(q q_next) <= 1/(q Qbound).
    """
    if Qbound < 2:
        raise ValueError("Qbound must be at least 2")
    x = Fraction(alpha)
    p0, q0, p1, q1 = 0, 1, 1, 0  # convergents h_{-2}/k_{-2}, h_{-1}/k_{-1}
    rest = x
    while True:
        t = math.floor(rest)
        p2, q2 = t * p1 + p0, t * q1 + q0
        if q2 > Qbound:
            break
        p0, q0, p1, q1 = p1, q1, p2, q2
        frac = rest - t
        if frac == 0:
            break
        rest = 1 / frac
    a, q = p1, q1
    ups = float(abs(x - Fraction(a, q)) * q * q)
    return RationalApprox(float(alpha), a, q, ups)


def exp_sum(weights: WeightTable, alpha, X: int) -> complex:
    """sum_{n <= X} w_n e(alpha n); a Fraction alpha is reduced exactly."""
    X = int(X)
    if weights.n_max < X:
        raise ValueError(f"weight table reaches {weights.n_max} < {X}")
    n = np.flatnonzero(weights.values[: X + 1])
    w = weights.values[n].astype(np.float64)
    if isinstance(alpha, Fraction):
        num, den = alpha.numerator, alpha.denominator
        theta = 2 * np.pi * ((n * num) % den) / den
    else:
        x = n * float(alpha)
        theta = 2 * np.pi * (x - np.rint(x))
    return complex(math.fsum((w * np.cos(theta)).tolist()), math.fsum((w * np.sin(theta)).tolist()))


def bound_rhs(X: float, q: int, Upsilon: float, r: int, kind) -> float:
    """Right-hand side of the r-fold exponential-sum bound with implied constant 1."""
    if q > X:
        raise ValueError("q must not exceed X")
    kind = WeightKind.parse(kind)
    logpow = 3 if kind is WeightKind.PRIME_TUPLE else 3 + r
    e = 1.0 / (2 * r)
    return math.log(X) ** logpow * (
        X * q ** (-e) * max(1.0, Upsilon**e)
        + X ** ((2 + 2 * r) / (3 + 2 * r))
        + X ** ((2 * r - 1) / (2 * r)) * q**e
    )


def sample_residues(q: int, cap: int = 32) -> list[int]:
    """Residues a in 1..q coprime to q, thinned to at most ``cap`` by a fixed stride."""
    units = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
    if len(units) <= cap:
        return units
    stride = math.ceil(len(units) / cap)
    return units[::stride][:cap]


def bound_ratio_scan(weights: WeightTable, r: int, X_list, q_list, kind=None) -> dict:
    """max over (X, q, a) of |S(a/q, X)| / bound_rhs(X, q, 1, r, kind)."""
    kind = WeightKind.parse(kind) if kind is not None else weights.kind
    best = (-1.0, None)
    cells = []
    for X in X_list:
        for q in q_list:
            for a in sample_residues(q):
                s = abs(exp_sum(weights, Fraction(a, q), X))
                # alpha = a/q exactly, so Upsilon = 0, floored at 1 inside the bound.
                ratio = s / bound_rhs(X, q, 1.0, r, kind)
                cells.append(ratio)
                if ratio > best[0]:
                    best = (ratio, {"X": int(X), "q": int(q), "a": int(a), "Upsilon": 0.0})
    return {
        "params": {"r": r, "kind": kind.name, "X": [int(x) for x in X_list], "q": [int(q) for q in q_list]},
        "max_ratio": best[0],
        "argmax": best[1],
        "cells": len(cells),
    }


def _prime_product(q: int) -> int:
    out = 1
    for p in _factorize(q):
        out *= -p
    return out


def major_arc_model(r, X, q, a, alpha, kind, constants: ConstantsTable | None = None, A: float | None = None) -> complex:
    """Leading term of Phi(rho e(alpha)) near a/q."""
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    kind = WeightKind.parse(kind)
    c = constants or build_constants()
    beta = alpha - a / q
    beta -= round(beta)
    if A is not None:
        Q = math.log(X) ** A
        if q > Q or abs(beta) > Q / (q * X):
            raise ValueError("alpha is not in the major arc M(q, a) for this A")
    factor = _prime_product(q) / q**2
    denom = 1 - 2j * math.pi * beta * X
    if kind is WeightKind.PRIME_TUPLE:
        main = c.zeta2 * r * X * math.log(math.log(X)) ** (r - 1) / (denom * math.log(X))
    else:
        main = c.zeta2 * X * math.log(X) ** (r - 1) / (math.factorial(r - 1) * denom)
    return main * factor


@dataclass
class SuppressionReport:
    X: float
    A_requested: float
    A_used: float
    max_ratio: float
    argmax: float
    samples: int
    ratios: list = field(repr=False, default_factory=list)

    def as_dict(self) -> dict:
        return {
            "X": self.X,
            "A_requested": self.A_requested,
            "A_used": self.A_used,
            "max_ratio": self.max_ratio,
            "argmax": self.argmax,
            "samples": self.samples,
        }


def _effective_exponent(X: float, A: float) -> float:
    if arcs_disjoint(X, A):
        return A
    # Degenerate decomposition: fall back to the largest disjoint one.
    return 0.999 * max_disjoint_exponent(X)


def minor_arc_samples(X: float, A: float, count: int, seed: int = 0):
    """``count`` uniform draws from the minor arcs; returns (alphas, exponent used)."""
    A_used = _effective_exponent(X, A)
    arcs = build_arcs(X, A_used)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        for x in rng.uniform(-0.5, 0.5, size=4 * count):
            if arcs.is_minor(float(x)):
                out.append(float(x))
                if len(out) == count:
                    break
    return np.array(out), A_used


def major_arc_samples(X: float, A: float, q_values, per_arc: int = 4, seed: int = 0):
    """Draws from M(q, a) for q in q_values and every a coprime to q.

    When the arcs at (X, A) overlap, each arc is clipped to half the gap to its
    Farey neighbours of order max(q_values) so samples stay near a/q.
    Returns a list of (q, a, alpha).
    """
    q_values = list(q_values)
    Q = math.log(X) ** A
    clip = not arcs_disjoint(X, A)
    order = max(q_values)
    rng = np.random.default_rng(seed)
    out = []
    for q in q_values:
        width = Q / (q * X)
        if clip:
            width = min(width, 1.0 / (2 * q * order))
        for a in range(1, q + 1):
            if math.gcd(a, q) != 1:
                continue
            for u in rng.uniform(-1.0, 1.0, size=per_arc):
                alpha = a / q + u * width
                out.append((q, a, (alpha + 0.5) % 1.0 - 0.5))
    return out


def suppression_scan(weights: WeightTable, X: float, alphas, A_requested: float, A_used: float) -> SuppressionReport:
    """max of Re Phi(rho e(alpha)) / Phi(rho) over the given alphas."""
    phi0 = phi_radial_derivative(weights, X, 0, tol=1e-12)
    values = phi_eval(weights, X, np.asarray(alphas, dtype=float))
    ratios = (values.real / phi0).tolist()
    i = int(np.argmax(ratios))
    return SuppressionReport(X, A_requested, A_used, ratios[i], float(alphas[i]), len(ratios), ratios)
