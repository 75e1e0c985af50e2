import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from huplab import specfun as sf


def _bisect(f, a, b, tol=1e-15):
    fa = f(a)
    while b - a > tol * max(1.0, b):
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def test_j_examples():
    assert sf.bessel_j(0, 0.0) == 1.0
    assert sf.bessel_j(1, 0.0) == 0.0
    assert abs(sf.bessel_j(0, 2.404825557695773)) <= 1e-12


@given(st.integers(0, 12), st.floats(0.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_j_matches_mpmath(m, x):
    ref = float(mpmath.besselj(m, x))
    val = float(sf.bessel_j(m, x))
    # relative near the peaks, absolute near zeros
    assert abs(val - ref) <= 1e-12 * max(abs(ref), 1e-2)


def test_j_negative_argument_parity():
    x = np.linspace(0.1, 30, 50)
    for m in range(5):
        assert np.allclose(sf.bessel_j(m, -x), (-1) ** m * sf.bessel_j(m, x), atol=1e-15)


@given(st.integers(0, 1), st.floats(1e-8, 50.0))
@settings(max_examples=200, deadline=None)
def test_y_matches_mpmath(m, x):
    ref = float(mpmath.bessely(m, x))
    assert abs(float(sf.bessel_y(m, x)) - ref) <= 1e-10 * max(abs(ref), 1e-1)


def test_y0_at_one_against_integral_representation():
    with mpmath.workdps(30):
        x = mpmath.mpf(1)
        a = mpmath.quad(lambda th: mpmath.sin(x * mpmath.sin(th)), [0, mpmath.pi]) / mpmath.pi
        b = 2 / mpmath.pi * mpmath.quad(lambda t: mpmath.exp(-x * mpmath.sinh(t)), [0, 1, 5, 10])
        oracle = float(a - b)
    assert oracle == pytest.approx(0.0882569642, abs=1e-10)
    assert abs(float(sf.bessel_y(0, 1.0)) - oracle) <= 1e-12


def test_y0_log_law():
    x = 1e-6
    y = float(sf.bessel_y(0, x))
    assert abs(y - 2 / math.pi * math.log(x) - 2 / math.pi * (sf.EULER_GAMMA - math.log(2))) < 1e-10
    # bounded difference as x -> 0
    d = [float(sf.bessel_y(0, t)) - 2 / math.pi * math.log(t) for t in (1e-4, 1e-6, 1e-8)]
    assert max(d) - min(d) < 1e-6


def test_y_domain_error():
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError, match="domain"):
            sf.bessel_y(0, bad)
    with pytest.raises(ValueError):
        sf.bessel_y(2, 1.0)


@pytest.mark.parametrize("x", [1.0, 5.0, 20.0])
def test_wronskian(x):
    # J0 Y0' - J0' Y0 with Y0' = -Y1 and J0' = -J1
    w = -sf.bessel_j(0, x) * sf.bessel_y(1, x) + sf.bessel_j(1, x) * sf.bessel_y(0, x)
    assert abs(w - 2 / (math.pi * x)) <= 1e-10


def test_three_term_recurrence():
    x = np.linspace(0.5, 50, 200)
    for m in range(1, 20):
        lhs = sf.bessel_j(m - 1, x) + sf.bessel_j(m + 1, x)
        assert np.max(np.abs(lhs - 2 * m / x * sf.bessel_j(m, x))) <= 1e-10


def test_derivative_by_central_differences():
    x = np.linspace(0.3, 40, 100)
    h = 1e-6
    fd = (sf.bessel_j(0, x + h) - sf.bessel_j(0, x - h)) / (2 * h)
    assert np.max(np.abs(fd + sf.bessel_j(1, x))) <= 1e-6
    assert np.allclose(sf.bessel_j_prime(3, x), 0.5 * (sf.bessel_j(2, x) - sf.bessel_j(4, x)), atol=1e-14)


def test_zero_examples_against_bisection_oracle():
    j0 = lambda t: float(mpmath.besselj(0, t))
    j1 = lambda t: float(mpmath.besselj(1, t))
    assert sf.bessel_j_zeros(0, 1)[0] == pytest.approx(_bisect(j0, 2, 3), abs=1e-12)
    assert sf.bessel_j_zeros(1, 1)[0] == pytest.approx(_bisect(j1, 3, 4), abs=1e-12)
    assert sf.bessel_j_zeros(0, 1)[0] == pytest.approx(2.404825557695773, abs=1e-13)
    assert sf.bessel_j_zeros(1, 1)[0] == pytest.approx(3.831705970207512, abs=1e-13)


def test_zeros_interlace():
    z0 = sf.bessel_j_zeros(0, 6)
    z1 = sf.bessel_j_zeros(1, 6)
    for k in range(5):
        assert z0[k] < z1[k] < z0[k + 1]


@pytest.mark.parametrize("m", [0, 1, 2, 5, 10])
def test_zero_table_invariants(m):
    tab = sf.bessel_j_zeros(m, 8)
    z = np.array(tab.zeros)
    assert len(tab) == 8 and np.all(np.diff(z) > 1.0) and z[0] > 0
    assert np.all(np.abs(sf.bessel_j(m, z)) <= 1e-12)
    assert np.all(sf.bessel_j(m, z - 1e-12) * sf.bessel_j(m, z + 1e-12) <= 0)
    below = sf.bessel_j_zeros_below(m, z[-1] + 0.5)
    assert np.allclose(below.zeros, z, atol=1e-13)


def test_zero_table_csv(tmp_path):
    path = tmp_path / "zeros.csv"
    sf.bessel_j_zeros(0, 3).to_csv(path)
    assert len(path.read_text().strip().splitlines()) >= 3


def _fresnel_exact(a, b, eps):
    # (1/sqrt(pi eps)) int_a^b exp(i y^2 / eps) dy through the Fresnel integrals
    def F(y):
        w = mpmath.sign(y) * abs(y) / mpmath.sqrt(eps) * mpmath.sqrt(2 / mpmath.pi)
        return mpmath.sqrt(mpmath.pi / 2) * (mpmath.fresnelc(w) + 1j * mpmath.fresnels(w))
    with mpmath.workdps(30):
        return complex((F(b) - F(a)) * mpmath.sqrt(eps) / mpmath.sqrt(mpmath.pi * eps))


@pytest.mark.parametrize("a,b,eps", [(-1, 1, 1e-4), (-0.3, 2.0, 1e-3), (1, 2, 1e-2), (-2, -0.5, 1e-5)])
def test_fresnel_constant_amplitude_exact(a, b, eps):
    val = sf.fresnel_quadrature(a, b, eps, lambda y: np.ones_like(y))
    assert abs(val - _fresnel_exact(a, b, eps)) <= 1e-8


def test_fresnel_without_stationary_point_decays():
    vals = [abs(sf.fresnel_quadrature(1, 2, e, lambda y: np.ones_like(y))) for e in (1e-2, 1e-3, 1e-4, 1e-5)]
    for e, v in zip((1e-2, 1e-3, 1e-4, 1e-5), vals):
        assert v <= math.sqrt(e)


def test_fresnel_rate_for_amplitude_vanishing_at_ends():
    amp = lambda y: (1 - y * y) ** 2 * np.exp(0.3 * y)
    target = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    errs = [abs(sf.fresnel_quadrature(-1, 1, e, amp) - target) for e in (1e-2, 5e-3, 2.5e-3, 1.25e-3)]
    for e0, e1 in zip(errs[:-1], errs[1:]):
        assert 1.5 <= e0 / e1 <= 2.5


def test_fresnel_endpoint_term_is_order_sqrt_eps():
    # with amplitude 1 on [-1, 1] the error is ~ sqrt(eps / pi), ratio sqrt(2) per halving
    target = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    for e in (1e-3, 1e-4, 1e-5):
        err = abs(sf.fresnel_quadrature(-1, 1, e, lambda y: np.ones_like(y)) - target)
        assert 0.5 * math.sqrt(e / math.pi) <= err <= 1.5 * math.sqrt(e / math.pi)


@pytest.mark.xfail(strict=True, reason="stated tolerance ignores the O(sqrt(eps)) endpoint term; see decisions ledger")
def test_fresnel_stated_example_unit_amplitude():
    val = sf.fresnel_quadrature(-1, 1, 1e-4, lambda y: np.ones_like(y))
    assert abs(val - complex(math.cos(math.pi / 4), math.sin(math.pi / 4))) <= 5e-4


@pytest.mark.xfail(strict=True, reason="halving ratio is sqrt(2) for amplitudes nonzero at the ends; see decisions ledger")
def test_fresnel_stated_ratio_unit_amplitude():
    target = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    e = [abs(sf.fresnel_quadrature(-1, 1, x, lambda y: np.ones_like(y)) - target) for x in (1e-3, 5e-4)]
    assert 1.5 <= e[0] / e[1] <= 2.5


def test_fresnel_errors():
    with pytest.raises(ValueError):
        sf.fresnel_quadrature(-1, 1, 0.0, lambda y: y)
    with pytest.raises(ValueError):
        sf.fresnel_quadrature(1, -1, 1e-3, lambda y: y)
    with pytest.raises((ValueError, ArithmeticError)):
        sf.fresnel_quadrature(-1, 1, 1e-3, lambda y: np.full_like(y, np.nan))
