"""Evaluation of Phi(z) = sum_j (1/j) sum_n w_n z^(jn) inside the unit disc."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy import integrate, special

from ._parallel import worker_count
from .ntheory import WeightTable, primes_up_to


class TruncationError(ValueError):
    """The weight table is too short to certify the requested tolerance."""


@lru_cache(maxsize=16)
def phi_coefficients(weights: WeightTable, N: int) -> np.ndarray:
    """c_k = sum over j n = k of w_n / j, for k <= N (so Phi(z) = sum c_k z^k)."""
    if N > weights.n_max:
        raise TruncationError(f"need {N} weights, table has {weights.n_max}")
    w = weights.values[: N + 1].astype(np.float64)
    coef = np.zeros(N + 1)
    s = math.isqrt(N)
    for j in range(1, s + 1):
        m = N // j
        coef[j::j][:m] += w[1 : m + 1] / j
    n_hi = N // (s + 1)
    for n in np.flatnonzero(w[: n_hi + 1]).tolist():
        js = np.arange(s + 1, N // n + 1)
        coef[n * js] += w[n] / js
    coef.setflags(write=False)
    return coef


@dataclass(frozen=True)
class PhiEvalConfig:
    X: float
    J: int
    N: int
    tail_bound: float


@lru_cache(maxsize=16)
def _density(weights: WeightTable) -> float:
    """max_k c_k / k^0.2 over the table; the crude growth constant behind tail bounds."""
    coef = phi_coefficients(weights, weights.n_max)
    k = np.arange(1, len(coef))
    return float(np.max(coef[1:] / k**0.2))


def _tail(D: float, X: float, N: int, power: float) -> float:
    """Bound on D sum_{k>N} k^power e^(-k/X)."""
    a = power + 1.0
    x = (N - 1) / X
    if x <= power:
        return math.inf
    return D * X**a * float(special.gamma(a) * special.gammaincc(a, x))


def plan(weights: WeightTable, X: float, tol: float = 1e-12, m: int = 0) -> PhiEvalConfig:
    """Smallest N = X L (L growing) whose certified tail is below tol times the value."""
    D = _density(weights)
    L = 8.0
    while True:
        N = int(math.ceil(X * L))
        if N > weights.n_max:
            raise TruncationError(f"tolerance {tol} needs N > {weights.n_max} at X={X}")
        coef = phi_coefficients(weights, weights.n_max)
        k = np.arange(N + 1, dtype=np.float64)
        value = float(np.sum(coef[: N + 1] * k**m * np.exp(-k / X)))
        bound = _tail(D, X, N, m + 0.2)
        if value > 0 and bound <= tol * value:
            support = weights.support
            smallest = int(support[0]) if len(support) else 1
            return PhiEvalConfig(X, N // smallest, N, bound)
        L += 4.0


def _terms(weights, X, tol):
    cfg = plan(weights, X, tol)
    coef = phi_coefficients(weights, weights.n_max)[: cfg.N + 1]
    k = np.arange(cfg.N + 1, dtype=np.float64)
    return cfg, k, coef * np.exp(-k / X)


def phi_eval(weights: WeightTable, X: float, alpha, tol: float = 1e-12):
    """Phi(rho e(alpha)) with rho = exp(-1/X); alpha may be a scalar or an array."""
    if X < 1:
        raise ValueError("X must exceed 1")
    cfg, k, b = _terms(weights, X, tol)
    alphas = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    out = np.empty(len(alphas), dtype=complex)
    for i, a in enumerate(alphas):
        x = k * a
        theta = 2 * math.pi * (x - np.rint(x))
        out[i] = complex(np.dot(b, np.cos(theta)), np.dot(b, np.sin(theta)))
    return out[0] if np.ndim(alpha) == 0 else out


def phi_on_uniform_grid(weights: WeightTable, X: float, T: int, tol: float = 1e-12) -> np.ndarray:
    """Phi(rho e(alpha_t)) at alpha_t = t/T - 1/2, t = 0..T-1, via one FFT."""
    cfg, k, b = _terms(weights, X, tol)
    b = b * np.where(k.astype(np.int64) % 2 == 0, 1.0, -1.0)
    folded = np.bincount(k.astype(np.int64) % T, weights=b, minlength=T)
    return np.fft.ifft(folded) * T


def phi_radial_derivative(weights: WeightTable, X: float, m: int, tol: float = 1e-10) -> float:
    """(rho d/drho)^m Phi(rho) = sum_k k^m c_k rho^k."""
    if not 0 <= m <= 3:
        raise ValueError("m must be in 0..3")
    cfg = plan(weights, X, tol, m)
    coef = phi_coefficients(weights, weights.n_max)[: cfg.N + 1]
    k = np.arange(cfg.N + 1, dtype=np.float64)
    return float(np.sum(coef * k**m * np.exp(-k / X)))


def laplace_check(a: int, b: float, lam: float, gamma: complex):
    """Quadrature of int_2^inf (loglog t)^a (log t)^-b t^lam e^(-gamma t) dt against
    (loglog 1/g1)^a (log 1/g1)^-b Gamma(lam+1)/gamma^(lam+1), g1 = Re gamma.

    Returns (integral, leading term, ratio).
    """
    gamma = complex(gamma)
    g1, g2 = gamma.real, gamma.imag
    if g1 <= 0:
        raise ValueError("Re(gamma) must be positive")
    if g1 > 1e-2:
        raise ValueError("Re(gamma) must be at most 1e-2 (asymptotic regime)")

    def f(t):
        return math.log(math.log(t)) ** a * math.log(t) ** (-b) * t**lam * math.exp(-g1 * t)

    # Integrand mass lives on t ~ (lam+1)/g1; stop once e^(-g1 t) t^lam is negligible.
    upper = 2.0 + (60.0 + 2 * lam * math.log(1 + 1 / g1)) / g1
    breaks = np.geomspace(2.0, upper, 40)
    re = im = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if g2 == 0:
            v, _ = integrate.quad(f, lo, hi, limit=200, epsabs=0, epsrel=1e-11)
            re += v
            continue
        vc, _ = integrate.quad(f, lo, hi, weight="cos", wvar=g2, limit=400, epsabs=0, epsrel=1e-10)
        vs, _ = integrate.quad(f, lo, hi, weight="sin", wvar=g2, limit=400, epsabs=0, epsrel=1e-10)
        re += vc
        im -= vs
    value = complex(re, im)
    L = math.log(1 / g1)
    leading = math.log(L) ** a * L ** (-b) * math.gamma(lam + 1) / gamma ** (lam + 1)
    return value, leading, value / leading


@lru_cache(maxsize=8)
def tuple_product_weights(r: int, prime_bound: int) -> dict[int, int]:
    """Multiplicity of each product p_1...p_r over ordered tuples of primes <= prime_bound."""
    primes = primes_up_to(prime_bound).tolist()
    counts: dict[int, int] = {}
    for tup in product(primes, repeat=r):
        n = math.prod(tup)
        counts[n] = counts.get(n, 0) + 1
    return counts


def truncated_log_product(z, r: int, prime_bound: int):
    """sum over r-tuples of primes <= prime_bound of -log(1 - z^(p_1...p_r)), principal branch."""
    counts = tuple_product_weights(r, prime_bound)
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    nz = z != 0
    logz = np.log(z[nz])
    part = np.zeros(logz.shape, dtype=complex)
    for e in sorted(counts):
        part -= counts[e] * np.log1p(-np.exp(e * logz))
    out[nz] = part
    return out if out.ndim else complex(out)


def domain_grid(r: int, prime_bound: int, resolution: int, radius_cap: float = 0.99) -> np.ndarray:
    """log of the truncated product prod (1 - z^(p_1...p_r))^-1 on a square pixel grid.

    The grid covers [-1, 1]^2 at pixel centres, row 0 at the top (Im z > 0).
    Pixels with |z| > radius_cap are NaN.
    """
    if prime_bound > 200:
        raise ValueError("prime_bound must be at most 200")
    if resolution > 4096:
        raise ValueError("resolution must be at most 4096")
    if not 0 < radius_cap < 1:
        raise ValueError("radius_cap must lie in (0, 1)")

    # Integer numerators keep the grid exactly symmetric under conjugation.
    idx = np.arange(resolution)
    coords = (2 * idx - (resolution - 1)) / resolution
    re, im = np.meshgrid(coords, -coords)
    z = re + 1j * im
    inside = np.abs(z) <= radius_cap
    out = np.full(z.shape, complex(np.nan, np.nan))
    zin = z[inside]

    size = max(1, len(zin) // (4 * worker_count()) + 1)
    slices = [slice(i, i + size) for i in range(0, len(zin), size)]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        parts = list(pool.map(lambda sl: truncated_log_product(zin[sl], r, prime_bound), slices))
    if parts:
        out[inside] = np.concatenate(parts)
    return out
