import math

import pytest

from circle_partitions import ntheory as nt
from circle_partitions import progressions as pg
from circle_partitions.genfun import TruncationError, phi_radial_derivative


def test_small_counts():
    p1 = nt.dirichlet_power("pr", 1, 100)
    assert pg.count_progression(p1, 10, 1, 0).count == 4
    assert pg.count_progression(nt.dirichlet_power("pr", 2, 100), 10, 1, 0).count == 6
    psi = pg.count_progression(nt.dirichlet_power("lambda", 1, 100), 10, 1, 0).count
    assert psi == pytest.approx(3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7), rel=1e-14)
    assert psi == pytest.approx(7.8320, abs=1e-4)


def test_counts_match_direct_filter(primes_1e6):
    for t in (1, 2, 3, 997, 10**4, 10**6):
        for q in (1, 3, 4, 10):
            for ell in range(q):
                if math.gcd(ell, q) != 1:
                    continue
                direct = int(sum(primes_1e6.values[n] for n in range(ell or q, t + 1, q))) if t <= 10**4 else None
                got = pg.count_progression(primes_1e6, t, q, ell).count
                if direct is not None:
                    assert got == direct


def test_leading_and_ratio():
    w = nt.dirichlet_power("pr", 2, 1000)
    p = pg.count_progression(w, 1000, 4, 1)
    assert p.leading == pytest.approx(2 / 2 * 1000 * math.log(math.log(1000)) / math.log(1000))
    assert p.ratio == pytest.approx(p.count / p.leading)
    lam = nt.dirichlet_power("lambda", 3, 1000)
    assert pg.count_progression(lam, 1000, 5, 2).leading == pytest.approx(1000 * math.log(1000) ** 2 / (2 * 4))


def test_errors():
    w = nt.dirichlet_power("pr", 1, 100)
    with pytest.raises(ValueError):
        pg.count_progression(w, 50, 4, 2)
    with pytest.raises(ValueError):
        pg.count_progression(w, 101, 4, 1)


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_residue_classes_sum_to_coprime_total(request, r, q):
    w = request.getfixturevalue("primes_1e6" if r == 1 else "semiprimes_1e6")
    report = pg.equidistribution_report(w, 10**6, q)
    assert sum(c["count"] for c in report["classes"]) == pg.coprime_total(w, 10**6, q)
    assert report["max_relative_deviation"] <= 0.05


def test_equidistribution_pins(semiprimes_1e6):
    pins = {3: 6.343550126457293e-05, 4: 0.0013864684244434087, 5: 0.001914386549806608}
    for q, pin in pins.items():
        assert pg.equidistribution_report(semiprimes_1e6, 10**6, q)["max_relative_deviation"] == pytest.approx(pin, rel=1e-9)


def test_single_class_report(primes_1e6):
    report = pg.equidistribution_report(primes_1e6, 10**4, 2)
    assert len(report["classes"]) == 1
    assert report["max_relative_deviation"] == 0


def test_ratio_trend_toward_one():
    w = nt.dirichlet_power("pr", 1, 10**7)
    ratios = [pg.count_progression(w, t, 1, 0).ratio for t in (10**4, 10**5, 10**6, 10**7)]
    gaps = [abs(r - 1) for r in ratios]
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] <= 0.15


def test_u_sum():
    w = nt.dirichlet_power("pr", 1, 10**5)
    X = 200.0
    u = pg.u_sum(w, 1 / X)
    direct = math.fsum(math.exp(-n / X) for n in w.support.tolist())
    assert u.value.real == pytest.approx(direct, rel=1e-13)
    assert u.tail_bound < 1e-12
    # Phi(rho) = sum_j U(j/X) / j
    # U(j/X) < e^(-2j/X) X, so stopping at j = 2000 drops less than 1e-10.
    phi = math.fsum(pg.u_sum(w, j / X).value.real / j for j in range(1, 2000))
    assert phi == pytest.approx(phi_radial_derivative(w, X, 0, tol=1e-12), rel=1e-10)


def test_u_sum_leading_and_symmetry(primes_1e6):
    u = pg.u_sum(primes_1e6, 1e-3, 4, 1)
    ratio = (u.value / u.leading).real
    assert 0.5 <= ratio <= 1.5
    assert ratio == pytest.approx(1.0656360719640614, rel=1e-9)
    g = complex(1e-3, 0.01)
    assert pg.u_sum(primes_1e6, g.conjugate()).value == pytest.approx(pg.u_sum(primes_1e6, g).value.conjugate(), rel=1e-14)


def test_u_sum_tail_error():
    with pytest.raises(TruncationError):
        pg.u_sum(nt.dirichlet_power("pr", 1, 1000), 1e-3)
