"""Headline predictors, the saddle point n = rho Phi'(rho) and estimates built on it."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import ConstantsTable, build_constants, poly_Pr, poly_tildePr
from .genfun import phi_on_uniform_grid, phi_radial_derivative
from .ntheory import WeightKind, WeightTable


class Formula(str, enum.Enum):
    THM_PRIME = "prime_main_term"
    THM_LAMBDA = "lambda_main_term"
    SADDLE = "saddle_point"
    QUADRATURE = "circle_quadrature"


class CancellationError(ArithmeticError):
    """The quadrature sum is swamped by rounding: the coefficient is (numerically) zero."""


class SaddleError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SaddleSolution:
    n: int
    X: float
    rho: float
    residual: float


@dataclass(frozen=True)
class Prediction:
    n: int
    log_value: float
    formula: Formula


def q_of_n(n: float, r: int, constants: ConstantsTable | None = None) -> float:
    if n <= math.e:
        raise ValueError("q_of_n needs n > e")
    c = constants or build_constants()
    y = math.log(math.log(n)) - math.log(2)
    P = float(poly_Pr(r, c)(y))
    if P <= 0:
        raise ValueError(f"P_{r}({y:.6g}) = {P:.6g} is not positive; n is below the formula's range")
    num = math.log(n) + math.log(math.log(n)) - math.log(2) - math.log(P) - math.log(c.zeta2)
    return math.sqrt(num / (2 * c.zeta2 * P))


def effective_q(kind, r: int, n: float, constants: ConstantsTable | None = None) -> float:
    """Q(n) for r-full primes; (zeta(2) P~_r(log n / 2))^(-1/2) for Lambda^{*r}.

    Either way the predicted log count is 2 sqrt(n) / Q.
    """
    kind = WeightKind.parse(kind)
    c = constants or build_constants()
    if kind is WeightKind.PRIME_TUPLE:
        return q_of_n(n, r, c)
    if kind is WeightKind.VON_MANGOLDT_POWER:
        if r > 3:
            raise ValueError("the Lambda prediction is available for r <= 3 only")
        P = float(poly_tildePr(r, c)(math.log(n) / 2))
        if P <= 0:
            raise ValueError(f"P~_{r}(log n / 2) = {P:.6g} is not positive")
        return 1.0 / math.sqrt(c.zeta2 * P)
    raise ValueError("custom weights have no closed-form prediction")


def predict_log(kind, r: int, n: float, constants: ConstantsTable | None = None) -> Prediction:
    kind = WeightKind.parse(kind)
    Q = effective_q(kind, r, n, constants)
    formula = Formula.THM_PRIME if kind is WeightKind.PRIME_TUPLE else Formula.THM_LAMBDA
    return Prediction(int(n), 2 * math.sqrt(n) / Q, formula)


def _initial_x(weights: WeightTable, n: int) -> float:
    try:
        return math.sqrt(n) * effective_q(weights.kind, weights.r, max(n, 16))
    except ValueError:
        return math.sqrt(n)


def solve_saddle(weights: WeightTable, n: int, X0: float | None = None, max_iter: int = 200) -> SaddleSolution:
    """X with rho Phi'(rho) = n, rho = exp(-1/X), by bisection in log X."""
    if n < 2:
        raise ValueError("the saddle point needs n >= 2")
    if not np.any(weights.values[1:]):
        raise SaddleError("weights are identically zero")

    def f(logX):
        return phi_radial_derivative(weights, math.exp(logX), 1) - n

    mid = math.log(X0 or _initial_x(weights, n))
    lo, hi = mid - 1.0, mid + 1.0
    lo = max(lo, 0.0)  # X >= 1
    for _ in range(60):
        if f(lo) <= 0:
            break
        if lo == 0.0:
            raise SaddleError(f"no saddle with X >= 1 for n={n}")
        lo = max(lo - 1.0, 0.0)
    for _ in range(60):
        if f(hi) >= 0:
            break
        hi += 1.0
    else:
        raise SaddleError("could not bracket the saddle point")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if abs(val) <= 1e-10 * n or hi - lo < 1e-15:
            X = math.exp(mid)
            return SaddleSolution(n, X, math.exp(-1 / X), abs(val) / n)
        if val < 0:
            lo = mid
        else:
            hi = mid
    raise SaddleError(f"bisection did not converge in {max_iter} steps")


def saddle_estimate(weights: WeightTable, n: int, solution: SaddleSolution | None = None) -> Prediction:
    """log p(n) ~ n/X + Phi(rho) - log(2 pi Phi_(2)(rho)) / 2."""
    s = solution or solve_saddle(weights, n)
    phi = phi_radial_derivative(weights, s.X, 0)
    phi2 = phi_radial_derivative(weights, s.X, 2)
    return Prediction(n, n / s.X + phi - 0.5 * math.log(2 * math.pi * phi2), Formula.SADDLE)


QUADRATURE_LIMIT = 500


def circle_quadrature(weights: WeightTable, n: int) -> Prediction:
    """Trapezoid rule for Cauchy's integral on |z| = rho at the saddle radius."""
    if not 0 <= n <= QUADRATURE_LIMIT:
        raise ValueError(f"circle_quadrature needs 0 <= n <= {QUADRATURE_LIMIT}")
    X = solve_saddle(weights, n).X if n >= 2 else 1.0
    T = max(8 * n, 1024)
    values = phi_on_uniform_grid(weights, X, T)
    phi0 = phi_radial_derivative(weights, X, 0, tol=1e-12)
    # alpha_t = t/T - 1/2, so e(-n alpha_t) = (-1)^n e(-n t / T).
    t = np.arange(T)
    phase = np.exp(-2j * np.pi * ((n * t) % T) / T) * (-1) ** n
    terms = np.exp(values - phi0) * phase
    total = np.sum(terms) / T
    if abs(total) < 1e-10 * float(np.max(np.abs(terms))):
        raise CancellationError(f"quadrature for n={n} cancels to rounding level")
    return Prediction(n, n / X + phi0 + math.log(abs(total)), Formula.QUADRATURE)


def magnitude_report(weights: WeightTable, r: int, n_grid, constants: ConstantsTable | None = None) -> list[dict]:
    """Saddle quantities divided by their predicted magnitudes, one row per n."""
    c = constants or build_constants()
    rows = []
    for n in n_grid:
        s = solve_saddle(weights, int(n))
        Q = effective_q(weights.kind, r, n, c)
        row = {
            "n": int(n),
            "X": s.X,
            "X_ratio": s.X / (math.sqrt(n) * Q),
            "n_over_X_ratio": (n / s.X) / (math.sqrt(n) / Q),
        }
        for m in range(3):
            value = phi_radial_derivative(weights, s.X, m)
            row[f"m{m}_ratio"] = value / (math.gamma(m + 1) * n ** ((m + 1) / 2) * Q ** (m - 1))
        rows.append(row)
    return rows


def saddle_table_size(n: int) -> int:
    """Weight-table length that comfortably covers the saddle truncation at n."""
    return max(int(n), 200 * math.isqrt(int(n)) + 2000)
