import math

import mpmath
import numpy as np
import pytest
import scipy.sparse as sps
from scipy.sparse.linalg import eigsh

from huplab import geometry as geo
from huplab import kernels as ker
from huplab import potentials as pot
from huplab import spectra as sp
from huplab import specfun as sf
from huplab import transform as tr

J01 = 2.404825557695773


def _fd_rectangle(T, L, n=200, k=5):
    """Smallest Dirichlet eigenvalues of -Laplace on (0,T)x(0,L) by 5-point differences."""
    hx, hy = T / (n + 1), L / (n + 1)
    d = lambda h: sps.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]) / h ** 2
    A = sps.kronsum(d(hx), d(hy), format="csr")
    return np.sort(eigsh(A, k=k, sigma=0, which="LM", return_eigenvectors=False))


def test_disk_examples():
    t1 = sp.disk_spectrum(1.0, 10)
    assert t1.values[0] == pytest.approx(J01 ** 2, abs=1e-12)
    assert t1.values[0] == pytest.approx(5.7832, abs=1e-4)
    assert sp.disk_spectrum(2.0, 5).values[0] == pytest.approx(J01 ** 2 / 4, abs=1e-12)


def test_disk_merge_against_zero_tables():
    tab = sp.disk_spectrum(1.0, 12)
    oracle = sorted(z * z for m in range(12) for z in sf.bessel_j_zeros(m, 6).zeros for _ in range(1 + (m > 0)))
    assert np.allclose(tab.values, oracle[:12], atol=1e-10)
    for v, (m, k, fam) in zip(tab.values, tab.labels):
        assert sf.bessel_j_zeros(m, k)[k - 1] ** 2 == pytest.approx(v, abs=1e-10)
        assert fam in ("radial", "cos", "sin") and (fam == "radial") == (m == 0)


@pytest.mark.parametrize("T,L", [(math.pi, math.pi), (math.pi, math.pi / 2), (3.0, 2.0)])
def test_rectangle_against_finite_differences(T, L):
    tab = sp.rectangle_spectrum(T, L, 5)
    fd = _fd_rectangle(T, L)
    assert np.all(np.abs(tab.values - fd) <= 1e-3 * tab.values)


def test_rectangle_examples_and_symmetry():
    assert sp.rectangle_spectrum(math.pi, math.pi, 1).values[0] == pytest.approx(2.0, abs=1e-13)
    assert sp.rectangle_spectrum(math.pi, math.pi / 2, 1).values[0] == pytest.approx(5.0, abs=1e-13)
    a = sp.rectangle_spectrum(3.0, 1.7, 30).values
    b = sp.rectangle_spectrum(1.7, 3.0, 30).values
    assert np.allclose(a, b, rtol=1e-14)


def test_table_invariants_and_csv(tmp_path):
    for tab in (sp.disk_spectrum(1.3, 25), sp.rectangle_spectrum(2.0, 1.0, 25)):
        assert np.all(np.diff(tab.values) >= 0) and np.all(tab.values > 0)
        assert len(tab) == 25
    sp.rectangle_spectrum(2.0, 1.0, 4).to_csv(tmp_path / "s.csv")
    head = (tmp_path / "s.csv").read_text().splitlines()[0]
    assert head == "value,m,k,family"
    with pytest.raises(ValueError):
        sp.disk_spectrum(-1.0, 3)


def test_is_eigenvalue_examples():
    tab = sp.disk_spectrum(1.0, 20)
    hit = sp.is_eigenvalue(J01 ** 2, tab, 1e-9)
    assert hit.is_eigenvalue and hit.label[:2] == (0, 1)
    miss = sp.is_eigenvalue(4.0, tab, 1e-6)
    assert not miss.is_eigenvalue and miss.nearest == pytest.approx(5.7832, abs=1e-4)
    with pytest.raises(ValueError):
        sp.is_eigenvalue(4.0, tab, math.inf)
    with pytest.raises(sp.CoverageError):
        sp.is_eigenvalue(1e6, tab)


def test_eigen_density_examples():
    g = sp.eigen_density(1.0, (0, 1))
    g0 = -J01 * float(mpmath.besselj(1, J01))
    assert g(np.linspace(0, 4, 9)) == pytest.approx(np.full(9, g0), abs=1e-13)
    assert g0 == pytest.approx(-1.2485, abs=1e-4)
    lam = np.array([1.3, -0.4])
    r = np.linalg.norm(lam)
    assert abs(tr.fourier_stieltjes(g, lam) - 2 * math.pi * g0 * sf.bessel_j(0, r)) <= 1e-12


def test_mode_11_transform_by_jacobi_anger():
    # g = c cos(theta) gives g^(lam) = -2 pi i c J1(|lam|) cos(arg lam)
    j11 = sf.bessel_j_zeros(1, 1)[0]
    g = sp.eigen_density(1.0, (1, 1), "cos")
    c = j11 * sf.bessel_j_prime(1, j11)
    for r, a in ((1.0, 0.3), (4.2, 2.0), (j11, 1.1)):
        lam = r * np.array([math.cos(a), math.sin(a)])
        expect = -2j * math.pi * c * sf.bessel_j(1, r) * math.cos(a)
        assert abs(tr.fourier_stieltjes(g, lam) - expect) <= 1e-12
    th = np.linspace(0, 2 * math.pi, 16)
    assert tr.vanishes_on(g, j11 * np.stack([np.cos(th), np.sin(th)], -1), 1e-8).verdict


@pytest.mark.parametrize("mode,kind", [((0, 1), "cos"), ((0, 2), "cos"), ((1, 1), "cos"), ((2, 1), "sin"),
                                       ((3, 2), "cos")])
def test_eigen_density_not_hup_construction(mode, kind):
    dom = geo.disk(1.0)
    j = sf.bessel_j_zeros(mode[0], mode[1])[mode[1] - 1]
    g = sp.eigen_density(1.0, mode, kind, dom)
    th = 2 * math.pi * np.arange(32) / 32
    assert tr.vanishes_on(g, j * np.stack([np.cos(th), np.sin(th)], -1), 1e-8).verdict
    field = pot.PotentialField(ker.helmholtz2d(j), dom, g)
    ext = 1.6 * np.stack([np.cos(th[::4] + 0.1), np.sin(th[::4] + 0.1)], -1)
    assert pot.field_exterior_test(field, ext).max_abs <= 1e-6


def test_off_spectrum_frequency_does_not_vanish():
    g = sp.eigen_density(1.0, (0, 1))
    tab = sp.disk_spectrum(1.0, 30)
    th = 2 * math.pi * np.arange(32) / 32
    for c1 in (1.5, 3.0, 4.5):
        assert sp.is_eigenvalue(c1 * c1, tab).distance >= 0.5
        assert not tr.vanishes_on(g, c1 * np.stack([np.cos(th), np.sin(th)], -1), 1e-8).verdict


def test_eigenfunction_vanishes_on_boundary_and_density_is_normal_derivative():
    u = sp.eigenfunction(1.5, (2, 1), "cos")
    th = np.linspace(0, 6, 13)
    pts = 1.5 * np.stack([np.cos(th), np.sin(th)], -1)
    assert np.max(np.abs(u(pts))) <= 1e-14
    g = sp.eigen_density(1.5, (2, 1), "cos")
    h = 1e-6
    fd = (u(pts * (1 + h / 1.5)) - u(pts * (1 - h / 1.5))) / (2 * h)
    t = geo.angle_to_param(g.curve, (0.0, 0.0), th)
    assert np.allclose(g(t), fd, atol=1e-7)


def test_rectangle_eigen_density():
    T, L = 2.0, 1.0
    dom = geo.rectangle_domain(T, L)
    g = sp.rectangle_eigen_density(T, L, (1, 1), dom)
    c = math.pi * math.hypot(1 / T, 1 / L)
    s = np.linspace(-1, 1, 9)
    lam = c * np.stack([np.cos(s), np.sin(s)], -1)
    assert tr.vanishes_on(g, lam, 1e-8).verdict


def test_bad_modes():
    with pytest.raises(ValueError):
        sp.eigen_density(1.0, (0, 1), "sin")
    with pytest.raises(ValueError):
        sp.eigen_density(1.0, (1, 0))
