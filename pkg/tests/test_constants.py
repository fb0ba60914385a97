import math

import mpmath
import pytest

from circle_partitions import constants as c

mpmath.mp.dps = 30


@pytest.fixture(scope="module")
def table():
    return c.build_constants()


def test_against_mpmath(table):
    assert table.mertens_M == pytest.approx(float(mpmath.mertens), abs=1e-12)
    assert table.gamma1 == pytest.approx(float(mpmath.stieltjes(1)), abs=1e-12)
    assert table.zeta_prime2 == pytest.approx(float(mpmath.zeta(2, derivative=1)), abs=1e-12)
    assert table.zeta_dprime2 == pytest.approx(float(mpmath.zeta(2, derivative=2)), abs=1e-11)
    assert table.zeta3 == pytest.approx(float(mpmath.zeta(3)), abs=1e-14)


def test_table_invariants(table):
    assert abs(table.zeta2 - math.pi**2 / 6) <= 1e-14
    assert abs(table.mertens_M - (table.gamma - table.d_hat_1)) <= 1e-10
    assert abs(table.mertens_M - 0.26149721) <= 1e-8
    assert table.gamma_derivs[0] == 1.0
    assert abs(table.gamma_derivs[1] + table.gamma) <= 1e-12
    assert table.zeta_prime2 == pytest.approx(-0.9375482543, abs=1e-9)
    assert table.gamma1 == pytest.approx(-0.0728158454, abs=1e-8)


def test_precision_target_limit():
    with pytest.raises(ValueError):
        c.build_constants(precision_target=20)


def test_json_dump_round_trips(table):
    import json

    text = table.to_json()
    data = json.loads(text)
    assert f"{data['mertens_M']:.8f}" == "0.26149721"
    assert json.dumps(json.loads(text), indent=2) == text


def test_prime_zeta():
    assert c.prime_zeta(2) == pytest.approx(0.4522474200410655, abs=1e-13)
    assert c.prime_zeta(4) == pytest.approx(float(mpmath.primezeta(4)), abs=1e-14)
    for s in (10, 20, 30):
        assert abs(c.prime_zeta(s) / 2.0**-s - 1) <= 2 * (2 / 3) ** s
    with pytest.raises(ValueError):
        c.prime_zeta(1.5)


def _finite_difference_gamma(k, h=1e-3):
    # Richardson-extrapolated central differences of mpmath's Gamma (independent of the series).
    def central(step):
        if k == 1:
            return (mpmath.gamma(1 + step) - mpmath.gamma(1 - step)) / (2 * step)
        return (mpmath.gamma(1 + step) - 2 * mpmath.gamma(1) + mpmath.gamma(1 - step)) / step**2

    return float((4 * central(h / 2) - central(h)) / 3)


def test_gamma_derivatives():
    g = c.gamma_derivatives_at_one(20)
    assert g[0] == 1.0
    assert g[1] == pytest.approx(_finite_difference_gamma(1), abs=1e-10)
    assert g[2] == pytest.approx(_finite_difference_gamma(2), abs=1e-9)
    assert g[2] == pytest.approx(0.5772156649**2 + math.pi**2 / 6, abs=1e-9)
    for k in range(8):
        assert g[k] == pytest.approx(float(mpmath.diff(mpmath.gamma, 1, k)), rel=1e-11)
    with pytest.raises(ValueError):
        c.gamma_derivatives_at_one(21)


def test_gamma_derivative_recurrence():
    g = c.gamma_derivatives_at_one(12)
    psi = [-c.EULER_GAMMA] + [(-1) ** (j + 1) * math.factorial(j) * float(mpmath.zeta(j + 1)) for j in range(1, 12)]
    for k in range(11):
        rhs = math.fsum(math.comb(k, j) * psi[j] * g[k - j] for j in range(k + 1))
        assert g[k + 1] == pytest.approx(rhs, rel=1e-9)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_poly_pr_matches_closed_form(r, table):
    general, closed = c.poly_Pr(r, table), c.poly_Pr_closed(r, table)
    assert general.degree == r - 1
    assert abs(general.leading - r) <= 1e-9
    for a, b in zip(general, closed):
        assert abs(a - b) <= 1e-9


@pytest.mark.parametrize("r", range(5, 9))
def test_poly_pr_degree_and_leading(r, table):
    p = c.poly_Pr(r, table)
    assert p.degree == r - 1
    assert p.leading == pytest.approx(r, abs=1e-9)


def test_poly_examples(table):
    assert c.poly_Pr(1).coefficients == (1.0,)
    assert c.poly_Pr(2).coefficients == pytest.approx((0.52299442, 2.0), abs=1e-8)
    assert c.poly_Pr(3)[0] == pytest.approx(-4.729659, abs=1e-6)
    assert c.poly_tildePr(1).coefficients == (1.0,)
    p2 = c.poly_tildePr(2)
    assert p2[0] == pytest.approx(float(mpmath.zeta(2, derivative=1) / mpmath.zeta(2) - 3 * mpmath.euler), abs=1e-12)
    assert p2.leading == 1.0
    assert c.poly_tildePr(3).leading == 0.5
    assert c.poly_Pr_closed(4).leading == 4.0


def test_poly_ranges():
    with pytest.raises(ValueError):
        c.poly_Pr(9)
    with pytest.raises(ValueError):
        c.poly_Pr_closed(5)
    with pytest.raises(ValueError):
        c.poly_tildePr(4)


def test_polynomial_strips_trailing_zeros():
    p = c.Polynomial((1.0, 2.0, 0.0, 0.0))
    assert p.degree == 1 and p(2.0) == 5.0
    assert c.Polynomial((0.0,)).degree == -1


def test_em_convergence_error():
    with pytest.raises(c.ConvergenceError):
        c.zeta_log_derivative(1, N=2, n_terms=8)
