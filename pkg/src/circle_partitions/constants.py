"""Constants and polynomials entering the main-term formulas.

Everything is double precision. Zeta derivatives and the first Stieltjes
constant come from Euler-Maclaurin summation over terms of the form
``x**(-s) * poly(log x)``; the prime zeta function uses the Moebius
inversion of ``log zeta``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from math import comb, factorial

import numpy as np
from scipy import special

from .ntheory import mobius_upto

EULER_GAMMA = float(np.euler_gamma)


class ConvergenceError(ArithmeticError):
    pass


# --- Euler-Maclaurin on f(x) = x^(-s) * sum_i c_i (log x)^i ------------------

def _bernoulli_even(k_max: int) -> list[float]:
    """B_2, B_4, ..., B_{2 k_max}."""
    b = special.bernoulli(2 * k_max)
    return [float(b[2 * k]) for k in range(1, k_max + 1)]


def _log_poly_derivative(coeffs: list[float], s: float) -> tuple[list[float], float]:
    """d/dx [x^-s P(log x)] = x^-(s+1) [P'(L) - s P(L)]."""
    deg = len(coeffs)
    out = [-s * c for c in coeffs]
    for i in range(1, deg):
        out[i - 1] += i * coeffs[i]
    return out, s + 1


def _eval_log_poly(coeffs, s, x) -> float:
    L = math.log(x)
    return sum(c * L**i for i, c in enumerate(coeffs)) * x ** (-s)


def _tail_integral(coeffs, s, N) -> float:
    """Integral from N to infinity of x^-s P(log x) dx, s > 1."""
    L = math.log(N)
    # I_i = N^(1-s) L^i/(s-1) + i/(s-1) I_{i-1}
    total = 0.0
    prev = N ** (1 - s) / (s - 1)
    total += coeffs[0] * prev
    for i in range(1, len(coeffs)):
        prev = N ** (1 - s) * L**i / (s - 1) + i / (s - 1) * prev
        total += coeffs[i] * prev
    return total


def _em_corrections(coeffs, s, N, n_terms) -> float:
    """sum_k B_2k/(2k)! f^(2k-1)(N), checked for decreasing magnitude."""
    bern = _bernoulli_even(n_terms)
    c, t = _log_poly_derivative(list(coeffs), s)
    out = []
    for k in range(1, n_terms + 1):
        out.append(bern[k - 1] / factorial(2 * k) * _eval_log_poly(c, t, N))
        c, t = _log_poly_derivative(c, t)
        c, t = _log_poly_derivative(c, t)
    mags = [abs(v) for v in out if v != 0.0]
    if any(b > a for a, b in zip(mags, mags[1:])):
        raise ConvergenceError("Euler-Maclaurin corrections are not decreasing")
    return math.fsum(out)


def zeta_log_derivative(j: int, s: float = 2.0, N: int = 200, n_terms: int = 6) -> float:
    """zeta^(j)(s) = sum_n (-log n)^j n^-s for s > 1."""
    coeffs = [0.0] * j + [(-1.0) ** j]
    head = math.fsum(_eval_log_poly(coeffs, s, n) for n in range(1, N))
    return (
        head
        + 0.5 * _eval_log_poly(coeffs, s, N)
        + _tail_integral(coeffs, s, N)
        - _em_corrections(coeffs, s, N, n_terms)
    )


def stieltjes_gamma1(N: int = 200, n_terms: int = 6) -> float:
    """lim_N (sum_{n<=N} log(n)/n - log(N)^2/2)."""
    coeffs = [0.0, 1.0]
    head = math.fsum(math.log(n) / n for n in range(1, N))
    return head + 0.5 * math.log(N) / N - 0.5 * math.log(N) ** 2 - _em_corrections(coeffs, 1.0, N, n_terms)


# --- prime zeta, Gamma derivatives --------------------------------------------

def prime_zeta(s: float) -> float:
    """P(s) = sum_p p^-s via sum_k mu(k)/k log zeta(ks)."""
    if s < 2:
        raise ValueError("prime_zeta is only certified for s >= 2")
    mu = mobius_upto(200)
    terms = []
    for k in range(1, 200):
        if 2.0 ** (-k * s) < 1e-18:
            break
        if mu[k]:
            terms.append(mu[k] / k * math.log1p(float(special.zetac(k * s))))
    return math.fsum(terms)


def gamma_derivatives_at_one(K: int) -> list[float]:
    """Gamma^(k)(1), k = 0..K, by exponentiating the series of log Gamma(1+x)."""
    if K > 20:
        raise ValueError("K must be at most 20")
    g = [0.0] * (K + 1)
    if K >= 1:
        g[1] = -EULER_GAMMA
    for k in range(2, K + 1):
        g[k] = (-1) ** k * float(special.zeta(k, 1)) / k
    f = [1.0] + [0.0] * K
    for n in range(1, K + 1):
        f[n] = math.fsum(k * g[k] * f[n - k] for k in range(1, n + 1)) / n
    return [factorial(k) * f[k] for k in range(K + 1)]


# --- constants table ----------------------------------------------------------

@dataclass(frozen=True)
class ConstantsTable:
    gamma: float
    gamma1: float
    zeta2: float
    zeta3: float
    zeta_prime2: float
    zeta_dprime2: float
    d_hat_1: float
    mertens_M: float
    gamma_derivs: tuple = field(default_factory=tuple)

    def to_json(self) -> str:
        data = asdict(self)
        data["gamma_derivs"] = list(self.gamma_derivs)
        return json.dumps(_round_sig(data), indent=2)


def _round_sig(obj, digits=15):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_sig(v, digits) for v in obj]
    return obj


def d_hat_at_one(tail_tol: float = 1e-16) -> float:
    """sum_{j>=2} P(j)/j; P(j) < 2^-j (1 + 2 (2/3)^j), so stop once that is below tol."""
    terms = []
    j = 2
    while True:
        terms.append(prime_zeta(j) / j)
        j += 1
        if 2.0 ** (-j) * 2 < tail_tol:
            break
    return math.fsum(terms)


_CACHE: dict[int, ConstantsTable] = {}


def build_constants(precision_target: int = 14, K: int = 12) -> ConstantsTable:
    if precision_target > 14:
        raise ValueError("only double-precision constants are supported (precision_target <= 14)")
    key = K
    if key in _CACHE:
        return _CACHE[key]
    d_hat = d_hat_at_one()
    table = ConstantsTable(
        gamma=EULER_GAMMA,
        gamma1=stieltjes_gamma1(),
        zeta2=math.pi**2 / 6,
        zeta3=float(special.zeta(3, 1)),
        zeta_prime2=zeta_log_derivative(1),
        zeta_dprime2=zeta_log_derivative(2),
        d_hat_1=d_hat,
        mertens_M=EULER_GAMMA - d_hat,
        gamma_derivs=tuple(gamma_derivatives_at_one(K)),
    )
    _CACHE[key] = table
    return table


# --- polynomials --------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, ascending coefficients, trailing zeros stripped."""

    coefficients: tuple

    def __post_init__(self):
        c = list(self.coefficients)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(float(v) for v in c) or (0.0,))

    @property
    def degree(self) -> int:
        if len(self.coefficients) == 1 and self.coefficients[0] == 0:
            return -1
        return len(self.coefficients) - 1

    @property
    def leading(self) -> float:
        return self.coefficients[-1]

    def __call__(self, y):
        return np.polynomial.polynomial.polyval(y, self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]


def poly_Pr(r: int, constants: ConstantsTable | None = None) -> Polynomial:
    """The main-term polynomial for r-full prime partitions (general formula).

    D(1) is taken as +sum_{j>=2} P(j)/j so that gamma - D(1) is the
    Meissel-Mertens constant.
    """
    if not 1 <= r <= 8:
        raise ValueError("poly_Pr supports 1 <= r <= 8")
    c = constants or build_constants()
    gd = c.gamma_derivs if len(c.gamma_derivs) > r else gamma_derivatives_at_one(r)
    D = c.d_hat_1
    coeffs = np.zeros(r + 1)
    for n in range(r + 1):
        outer = comb(r, n) * (-1) ** (r - n) * D ** (r - n)
        for h in range(n + 1):
            # Im[(i pi)^(n-h)]: nonzero only for odd n-h.
            e = n - h
            if e % 2 == 0:
                continue
            im = math.pi**e * (1 if e % 4 == 1 else -1)
            for k in range(h + 1):
                coeffs[h - k] += outer * comb(n, h) * comb(h, k) * (-1) ** k * im * gd[k]
    coeffs /= math.pi
    result = Polynomial(tuple(coeffs))
    if r <= 4:
        closed = poly_Pr_closed(r, c)
        if len(closed) != len(result) or max(abs(a - b) for a, b in zip(closed, result)) > 1e-9:
            raise ArithmeticError(f"P_{r} disagrees with its closed form")
    return result


def poly_Pr_closed(r: int, constants: ConstantsTable | None = None) -> Polynomial:
    c = constants or build_constants()
    M, z2, z3 = c.mertens_M, c.zeta2, c.zeta3
    if r == 1:
        return Polynomial((1.0,))
    if r == 2:
        return Polynomial((2 * M, 2.0))
    if r == 3:
        return Polynomial(tuple(3 * v for v in (M * M - z2, 2 * M, 1.0)))
    if r == 4:
        return Polynomial(tuple(4 * v for v in (2 * z3 - 3 * z2 * M + M**3, 3 * (M * M - z2), 3 * M, 1.0)))
    raise ValueError("closed forms exist for r = 1..4 only")


def poly_tildePr_closed(r: int, constants: ConstantsTable | None = None) -> Polynomial:
    """Main-term polynomial for Lambda^{*r} partitions, r = 1..3.

    Leading coefficient is 1/(r-1)!.
    """
    c = constants or build_constants()
    g, g1 = c.gamma, c.gamma1
    z1 = c.zeta_prime2 / c.zeta2
    z2 = c.zeta_dprime2 / c.zeta2
    if r == 1:
        return Polynomial((1.0,))
    if r == 2:
        return Polynomial((z1 - 3 * g, 1.0))
    if r == 3:
        const = 6 * g1 + 0.5 * z2 - 4 * g * z1 + 9.5 * g * g + 0.5 * c.zeta2
        return Polynomial((const, z1 - 4 * g, 0.5))
    raise ValueError("the Lambda polynomial is only available for r = 1..3")


def poly_tildePr(r: int, constants: ConstantsTable | None = None) -> Polynomial:
    return poly_tildePr_closed(r, constants)
