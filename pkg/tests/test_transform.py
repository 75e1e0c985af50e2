import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from huplab import dynamics as dyn
from huplab import geometry as geo
from huplab import spectra as sp
from huplab import transform as tr

UNIT = geo.circle(1.0)
ONE = tr.Density.constant(UNIT)


def _midpoint_oracle(f, lam, n=10 ** 6):
    # g^(lam) on the unit circle by the midpoint rule in theta
    th = (np.arange(n) + 0.5) * 2 * math.pi / n
    x = np.stack([np.cos(th), np.sin(th)], -1)
    return complex(np.sum(np.exp(-1j * x @ np.asarray(lam)) * f(th)) * 2 * math.pi / n)


@pytest.mark.parametrize("lam", [(0.0, 0.0), (1.0, 0.0), (3.0, -4.0), (0.0, 12.5)])
def test_constant_density_is_bessel(lam):
    val = tr.fourier_stieltjes(ONE, np.array(lam))
    r = math.hypot(*lam)
    assert abs(val - 2 * math.pi * float(mpmath.besselj(0, r))) <= 1e-12
    assert abs(val - _midpoint_oracle(lambda th: 1.0, lam)) <= 1e-10


def test_zero_frequency_gives_integral():
    g = tr.Density.from_points(geo.ellipse(2.0, 1.0), lambda z: z[..., 0] ** 2 + 1j)
    integral = geo.arc_quadrature(g.curve, lambda z: z[..., 0] ** 2 + 1j, 128)
    assert abs(tr.fourier_stieltjes(g, np.zeros(2)) - integral) <= 1e-12
    assert abs(tr.fourier_stieltjes(ONE, np.zeros(2)) - 2 * math.pi) <= 1e-13


@pytest.mark.parametrize("r", [0.5, 2.0, 7.3, 19.0])
def test_first_harmonic_is_j1(r):
    g = tr.Density.from_angle(UNIT, lambda th: np.exp(1j * th))
    val = tr.fourier_stieltjes(g, np.array([r, 0.0]))
    assert abs(val + 2j * math.pi * float(mpmath.besselj(1, r))) <= 1e-12
    assert abs(val - _midpoint_oracle(lambda th: np.exp(1j * th), (r, 0.0))) <= 1e-10


def test_vanishes_on_examples():
    g = sp.eigen_density(1.0, (0, 1))
    th = 2 * math.pi * np.arange(64) / 64
    circ = np.stack([np.cos(th), np.sin(th)], -1)
    j01 = 2.404825557695773
    assert tr.vanishes_on(g, j01 * circ, 1e-8).verdict
    miss = tr.vanishes_on(g, 2.0 * circ, 1e-8)
    assert not miss.verdict and np.min(np.abs(miss.values)) >= 0.1
    ce = dyn.rational_counterexample(3, 1)
    r = np.linspace(-15, 15, 61)
    lams = np.concatenate([np.stack([r, 0 * r], -1), np.stack([r * 0.5, r * math.sqrt(3) / 2], -1)])
    assert tr.vanishes_on(ce.density, lams, 1e-8).verdict


def test_vanishes_on_contract_errors():
    with pytest.raises(ValueError):
        tr.vanishes_on(ONE, np.zeros((0, 2)), 1e-8)
    with pytest.raises(ValueError):
        tr.vanishes_on(ONE, np.zeros((1, 2)), 1.5)
    zero = tr.Density.constant(UNIT, 0.0)
    rep = tr.vanishes_on(zero, np.ones((3, 2)), 1e-8)
    assert rep.verdict and rep.max_abs == 0
    # a table whose spline integrates to nothing while its samples do not
    broken = tr.Density(UNIT, lambda t: np.zeros(np.shape(t)), tr.C2, None, np.ones((4, 5)))
    with pytest.raises(tr.DensityError):
        tr.vanishes_on(broken, np.ones((1, 2)), 1e-8)


def test_report_serialisation(tmp_path):
    rep = tr.vanishes_on(ONE, np.array([[1.0, 2.0], [0.0, 3.0]]), 1e-8)
    d = json.loads(rep.to_json())
    assert d["max_abs"] == rep.max_abs == max(abs(v) for v in rep.values)
    assert d["schema_version"] == tr.SCHEMA_VERSION
    rep.to_csv(tmp_path / "g.csv")
    lines = (tmp_path / "g.csv").read_text().splitlines()
    assert lines[0] == "lambda1,lambda2,re_ghat,im_ghat" and len(lines) == 3


def test_fourier_coefficient_examples():
    a = tr.fourier_coefficients(tr.Density.from_angle(UNIT, lambda th: np.exp(3j * th)), 8)
    assert abs(a[8 + 3] - 1) <= 1e-12
    assert np.max(np.abs(np.delete(a, 8 + 3))) <= 1e-12
    a = tr.fourier_coefficients(ONE, 4)
    assert abs(a[4] - 1) <= 1e-12
    a = tr.fourier_coefficients(dyn.rational_counterexample(3, 1).density, 10)
    assert abs(a[13] - 1) <= 1e-12 and abs(a[7] + 1) <= 1e-12
    live = np.abs(a) > 1e-10
    assert np.count_nonzero(live) == 2


@given(st.floats(-15, 15), st.floats(-15, 15))
@settings(max_examples=50, deadline=None)
def test_conjugate_symmetry_for_real_density(l1, l2):
    g = tr.Density.from_points(geo.ellipse(2.0, 1.0, (0.3, 0.1)), lambda z: 1 + z[..., 0] * z[..., 1])
    lam = np.array([l1, l2])
    assert abs(tr.fourier_stieltjes(g, -lam) - np.conj(tr.fourier_stieltjes(g, lam))) <= 1e-12 * 20


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=40, deadline=None)
def test_translation_covariance(l1, l2, s1, s2):
    base = geo.ellipse(1.5, 1.0)
    f = lambda z: np.cos(z[..., 0]) + 0.5j * z[..., 1]
    g = tr.Density.from_points(base, f)
    shift = np.array([s1, s2])
    moved = base.translated(shift)
    gs = tr.Density.from_points(moved, lambda z: f(z - shift))
    lam = np.array([l1, l2])
    expect = np.exp(-1j * lam @ shift) * tr.fourier_stieltjes(g, lam)
    assert abs(tr.fourier_stieltjes(gs, lam) - expect) <= 1e-10


def test_linear_map_phase_identity(rng):
    T = np.array([[2.0, 0.5], [-0.3, 1.2]])
    x = rng.standard_normal((50, 2))
    lam = rng.standard_normal((50, 2))
    lam_t = lam @ np.linalg.inv(T)      # rows of (T^-1)^T lam
    assert np.allclose(np.sum(lam * x, 1), np.sum(lam_t * (x @ T.T), 1), atol=1e-13)


def test_paley_wiener_bound_on_complex_line():
    dom = geo.ellipse_domain(2.0, 1.0, (0.5, -0.2))
    g = tr.Density.from_points(dom.boundary, lambda z: np.exp(0.3j * z[..., 0]) + z[..., 1])
    l1 = g.l1_norm(128)
    lam0, e = np.array([1.0, -2.0]), np.array([0.6, 0.8])
    for z in np.linspace(-3, 3, 20) * (1 + 1j):
        lam = lam0 + z * e
        # e^{-i lam.x} has modulus e^{Im lam . x}
        bound = l1 * math.exp(geo.support_function(dom, lam.imag))
        assert abs(tr.fourier_stieltjes(g, lam)) <= bound * (1 + 1e-12)


def test_tabulated_density_and_regularity():
    vals = np.ones((4, 9))
    g = tr.Density.tabulated(UNIT, vals)
    assert abs(tr.fourier_stieltjes(g, np.array([1.0, 0.0])) - 2 * math.pi * float(mpmath.besselj(0, 1))) <= 1e-10
    with pytest.raises(tr.DensityError):
        tr.Density.tabulated(UNIT, np.ones((3, 9)))
    assert tr.Density(UNIT, lambda t: t, tr.LP, 2.0).exponent() == 2.0
    with pytest.raises(ValueError):
        tr.fourier_stieltjes(ONE, np.zeros(2), nodes=4)
